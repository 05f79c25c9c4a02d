#include <majsynth/errors.hpp>
#include <majsynth/oracle.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace majsynth
{

exact_synthesizer::exact_synthesizer( uint32_t num_vars, uint32_t max_gates, bool allow_four_vars )
    : num_vars_( num_vars ), max_gates_( max_gates )
{
  if ( num_vars < 1u || num_vars > 4u || ( num_vars == 4u && !allow_four_vars ) )
  {
    throw usage_error( "exact synthesis supports up to 3 variables (4 with explicit override)" );
  }
  if ( max_gates > 7u || ( num_vars == 4u && max_gates > 4u ) )
  {
    throw usage_error( "exact synthesis gate bound too large (at most 7, or 4 for 4 variables)" );
  }
  num_rows_ = 1u << num_vars;
  num_tables_ = 1u << num_rows_;
  mask_ = num_tables_ - 1u;

  /* cost 0: constants and (complemented) variables */
  level_.emplace_back( num_tables_, unreachable );
  back_.emplace_back( num_tables_ );
  reached_.emplace_back();
  auto const add_leaf = [&]( uint32_t t, gene g, bool complemented ) {
    if ( level_[0][t] != unreachable )
      return;
    level_[0][t] = 0;
    auto& bp = back_[0][t];
    bp.is_leaf = true;
    bp.leaf = g;
    bp.complemented = complemented;
    reached_[0].push_back( t );
  };
  add_leaf( 0u, gene::constant( false ), false );
  add_leaf( mask_, gene::constant( true ), false );
  for ( uint32_t v = 0; v < num_vars; ++v )
  {
    auto const t = static_cast<uint32_t>( nth_var( num_vars, v ).word( 0 ) );
    add_leaf( t, gene::var( v ), false );
  }
  for ( uint32_t v = 0; v < num_vars; ++v )
  {
    auto const t = static_cast<uint32_t>( nth_var( num_vars, v ).word( 0 ) );
    add_leaf( ~t & mask_, gene::var( v ), true );
  }
}

void exact_synthesizer::expand_next()
{
  auto const k = static_cast<uint32_t>( level_.size() );
  std::vector<uint8_t> level( num_tables_, unreachable );
  std::vector<back_pointer> back( num_tables_ );
  std::vector<uint32_t> reached;

  auto const update = [&]( uint32_t t, uint8_t lvl, const back_pointer& bp ) {
    if ( level[t] == unreachable )
      reached.push_back( t );
    if ( lvl < level[t] )
    {
      level[t] = lvl;
      back[t] = bp;
    }
  };

  /* operand costs a <= b <= c with a + b + c = k - 1; MAJ is symmetric */
  for ( uint32_t a = 0; 3u * a <= k - 1u; ++a )
  {
    for ( uint32_t b = a; a + 2u * b <= k - 1u; ++b )
    {
      auto const c = k - 1u - a - b;
      for ( auto x : reached_[a] )
      {
        auto const lx = level_[a][x];
        for ( auto y : reached_[b] )
        {
          auto const ly = std::max( lx, level_[b][y] );
          for ( auto z : reached_[c] )
          {
            auto const lvl = static_cast<uint8_t>( 1u + std::max( ly, level_[c][z] ) );
            auto const t = ( x & y ) | ( y & z ) | ( z & x );
            if ( lvl >= level[t] )
              continue;
            back_pointer bp;
            bp.operand[0] = x;
            bp.operand[1] = y;
            bp.operand[2] = z;
            bp.cost[0] = static_cast<uint8_t>( a );
            bp.cost[1] = static_cast<uint8_t>( b );
            bp.cost[2] = static_cast<uint8_t>( c );
            update( t, lvl, bp );
            bp.complemented = true;
            update( ~t & mask_, lvl, bp );
          }
        }
      }
    }
  }
  std::sort( reached.begin(), reached.end() );
  level_.push_back( std::move( level ) );
  back_.push_back( std::move( back ) );
  reached_.push_back( std::move( reached ) );
}

chromosome exact_synthesizer::build( uint32_t cost, uint32_t table ) const
{
  auto const& bp = back_[cost][table];
  chromosome c;
  if ( bp.is_leaf )
  {
    c = chromosome::leaf( bp.leaf );
  }
  else
  {
    c = chromosome::make_maj( build( bp.cost[0], bp.operand[0] ), build( bp.cost[1], bp.operand[1] ),
                              build( bp.cost[2], bp.operand[2] ) );
  }
  return bp.complemented ? chromosome::make_inv( c ) : c;
}

uint32_t exact_synthesizer::to_index( const truth_table& t ) const
{
  if ( t.num_vars() != num_vars_ )
  {
    throw usage_error( "exact synthesis target arity mismatch" );
  }
  return static_cast<uint32_t>( t.word( 0 ) ) & mask_;
}

std::optional<exact_result> exact_synthesizer::find( const truth_table& target )
{
  auto const t = to_index( target );
  for ( uint32_t k = 0; k <= max_gates_; ++k )
  {
    while ( level_.size() <= k )
      expand_next();
    if ( level_[k][t] != unreachable )
    {
      return exact_result{ target, k, build( k, t ), level_[k][t] };
    }
  }
  return std::nullopt;
}

std::optional<exact_result> exact_min_majority( const truth_table& target, uint32_t max_gates, bool allow_four_vars )
{
  return exact_synthesizer( target.num_vars(), max_gates, allow_four_vars ).find( target );
}

void write_exact_cache( std::ostream& os, std::span<const exact_result> results )
{
  for ( auto const& r : results )
  {
    os << r.table.to_hex() << ' ' << r.min_maj << ' ' << to_expression( r.witness ) << '\n';
  }
}

std::vector<exact_result> read_exact_cache( std::istream& is, uint32_t num_vars )
{
  std::vector<exact_result> results;
  std::string line;
  std::size_t line_no = 0;
  while ( std::getline( is, line ) )
  {
    ++line_no;
    if ( line.empty() )
      continue;
    std::istringstream ls( line );
    std::string hex, expr;
    uint32_t min_maj = 0;
    if ( !( ls >> hex >> min_maj >> expr ) )
    {
      throw parse_error( line_no, 1, "expected '<hex> <min_maj> <expression>'" );
    }
    auto witness = parse_expression( expr );
    auto const table = truth_table::from_hex( num_vars, hex );
    auto const m = compute_metrics( witness );
    if ( evaluate( witness, num_vars ) != table || m.n_maj != min_maj )
    {
      throw parse_error( line_no, 1, "cached witness does not match its table or gate count" );
    }
    results.push_back( { table, min_maj, std::move( witness ), m.levels } );
  }
  return results;
}

verification verify_chromosomes( std::span<const chromosome> outputs, const circuit_spec& spec )
{
  if ( outputs.size() != spec.outputs.size() )
  {
    throw usage_error( "solution has " + std::to_string( outputs.size() ) + " output(s) but the problem has " +
                       std::to_string( spec.outputs.size() ) );
  }
  verification v;
  base_tables const base( spec.num_vars );
  for ( std::size_t i = 0; i < outputs.size(); ++i )
  {
    auto const want = from_minterms( spec.outputs[i], spec.num_vars );
    auto const got = evaluate( outputs[i], base );
    if ( got == want )
      continue;
    output_diff d{ spec.outputs[i].name, {}, {} };
    for ( uint64_t r = 0; r < want.num_rows(); ++r )
    {
      if ( want.get_bit( r ) && !got.get_bit( r ) )
        d.missing.push_back( r );
      else if ( !want.get_bit( r ) && got.get_bit( r ) )
        d.extra.push_back( r );
    }
    v.pass = false;
    v.diffs.push_back( std::move( d ) );
  }
  return v;
}

verification verify_solution( const solution_set& s, const circuit_spec& spec )
{
  return verify_chromosomes( s.chromosomes, spec );
}

} // namespace majsynth
