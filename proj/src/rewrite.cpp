#include <majsynth/errors.hpp>
#include <majsynth/rewrite.hpp>

#include <algorithm>
#include <optional>
#include <tuple>
#include <unordered_map>

namespace majsynth
{

namespace
{

void collect_signatures( const chromosome& c, const base_tables& base, signature_set& out )
{
  auto const tables = evaluate_nodes( c, base );
  for ( std::size_t i = 0; i < c.size(); ++i )
  {
    if ( c[i].is_gate() )
    {
      out.push_back( { c[i].kind(), tables[i] } );
    }
  }
}

void normalize( signature_set& s )
{
  std::sort( s.begin(), s.end() );
  s.erase( std::unique( s.begin(), s.end() ), s.end() );
}

/* per-position subtree facts, from one reversed scan */
struct subtree_info
{
  std::vector<uint32_t> gates;
  std::vector<uint32_t> depth;
  std::vector<std::size_t> end;
};

subtree_info analyze( const chromosome& c )
{
  subtree_info info;
  auto const n = c.size();
  info.gates.assign( n, 0u );
  info.depth.assign( n, 0u );
  info.end.assign( n, 0u );
  std::vector<std::size_t> stack;
  for ( std::size_t i = n; i-- > 0; )
  {
    auto const g = c[i];
    if ( g.is_leaf() )
    {
      info.end[i] = i + 1u;
    }
    else if ( g.kind() == gene_kind::inv )
    {
      auto const ch = stack.back();
      stack.pop_back();
      info.gates[i] = 1u + info.gates[ch];
      info.depth[i] = info.depth[ch];
      info.end[i] = info.end[ch];
    }
    else
    {
      auto const a = stack[stack.size() - 1u];
      auto const b = stack[stack.size() - 2u];
      auto const d = stack[stack.size() - 3u];
      stack.resize( stack.size() - 3u );
      info.gates[i] = 1u + info.gates[a] + info.gates[b] + info.gates[d];
      info.depth[i] = 1u + std::max( { info.depth[a], info.depth[b], info.depth[d] } );
      info.end[i] = info.end[d];
    }
    stack.push_back( i );
  }
  return info;
}

class simplifier
{
public:
  simplifier( const chromosome& in, const base_tables& base ) : in_( in ), base_( base )
  {
    out_.reserve( in.size() );
  }

  std::vector<gene> run()
  {
    std::size_t pos = 0;
    simplify( pos );
    return std::move( out_ );
  }

private:
  truth_table simplify( std::size_t& pos )
  {
    auto const start = out_.size();
    auto const g = in_[pos++];
    switch ( g.kind() )
    {
    case gene_kind::const0:
      out_.push_back( g );
      return base_.zero;
    case gene_kind::const1:
      out_.push_back( g );
      return base_.one;
    case gene_kind::var:
      if ( g.var_index() >= base_.vars.size() )
      {
        throw usage_error( "variable index out of range in local_improvement" );
      }
      out_.push_back( g );
      return base_.vars[g.var_index()];
    case gene_kind::inv:
    {
      out_.push_back( g );
      auto const table = ~simplify( pos );
      if ( out_[start + 1u].kind() == gene_kind::inv )
      {
        /* INV(INV(x)) -> x */
        out_.erase( out_.begin() + start, out_.begin() + start + 2u );
        return table;
      }
      fold_to_leaf( start, table );
      return table;
    }
    case gene_kind::maj:
    default:
    {
      out_.push_back( g );
      std::size_t begin[3];
      truth_table tables[3] = { base_.zero, base_.zero, base_.zero };
      for ( int k = 0; k < 3; ++k )
      {
        begin[k] = out_.size();
        tables[k] = simplify( pos );
      }
      auto const end = out_.size();
      auto const span_end = [&]( int k ) { return k == 2 ? end : begin[k + 1]; };
      auto const gates_in = [&]( int k ) {
        return std::count_if( out_.begin() + begin[k], out_.begin() + span_end( k ), []( gene x ) { return x.is_gate(); } );
      };
      auto const cheaper = [&]( int a, int b ) {
        auto const ga = gates_in( a ), gb = gates_in( b );
        if ( ga != gb )
          return ga < gb ? a : b;
        return ( span_end( a ) - begin[a] ) <= ( span_end( b ) - begin[b] ) ? a : b;
      };

      int keep = -1;
      static constexpr int pairs[3][3] = { { 0, 1, 2 }, { 0, 2, 1 }, { 1, 2, 0 } };
      for ( auto const& p : pairs )
      {
        if ( tables[p[0]] == tables[p[1]] )
        {
          keep = cheaper( p[0], p[1] );
          break;
        }
      }
      if ( keep < 0 )
      {
        for ( auto const& p : pairs )
        {
          if ( tables[p[0]] == ~tables[p[1]] )
          {
            keep = p[2];
            break;
          }
        }
      }
      if ( keep >= 0 )
      {
        auto const table = tables[keep];
        std::vector<gene> kept( out_.begin() + begin[keep], out_.begin() + span_end( keep ) );
        out_.resize( start );
        out_.insert( out_.end(), kept.begin(), kept.end() );
        return table;
      }
      auto const table = truth_table::maj( tables[0], tables[1], tables[2] );
      fold_to_leaf( start, table );
      return table;
    }
    }
  }

  void fold_to_leaf( std::size_t start, const truth_table& table )
  {
    std::optional<gene> leaf;
    if ( table == base_.zero )
      leaf = gene::constant( false );
    else if ( table == base_.one )
      leaf = gene::constant( true );
    else
    {
      for ( uint32_t v = 0; v < base_.vars.size(); ++v )
      {
        if ( table == base_.vars[v] )
        {
          leaf = gene::var( v );
          break;
        }
      }
    }
    if ( leaf )
    {
      out_.resize( start );
      out_.push_back( *leaf );
    }
  }

  const chromosome& in_;
  const base_tables& base_;
  std::vector<gene> out_;
};

struct candidate
{
  bool in_current = false;
  bool in_stored = false;
  std::size_t chrom = 0;
  std::size_t pos = 0;
  uint32_t gates = 0;
  uint32_t depth = 0;
  std::size_t length = 0;
};

} // namespace

signature_set gate_signatures( const chromosome& c, uint32_t num_vars )
{
  return gate_signatures( c, base_tables( num_vars ) );
}

signature_set gate_signatures( const chromosome& c, const base_tables& base )
{
  signature_set s;
  collect_signatures( c, base, s );
  normalize( s );
  return s;
}

signature_set gate_signatures( std::span<const chromosome> cs, const base_tables& base )
{
  signature_set s;
  for ( auto const& c : cs )
    collect_signatures( c, base, s );
  normalize( s );
  return s;
}

gate_counts count_by_kind( const signature_set& s )
{
  gate_counts n;
  for ( auto const& sig : s )
    ( sig.kind == gene_kind::maj ? n.maj : n.inv )++;
  return n;
}

gate_counts count_common( const signature_set& a, const signature_set& b )
{
  gate_counts n;
  auto i = a.begin();
  auto j = b.begin();
  while ( i != a.end() && j != b.end() )
  {
    if ( *i < *j )
      ++i;
    else if ( *j < *i )
      ++j;
    else
    {
      ( i->kind == gene_kind::maj ? n.maj : n.inv )++;
      ++i;
      ++j;
    }
  }
  return n;
}

gate_counts common_gates( std::span<const chromosome> x, std::span<const chromosome> y, uint32_t num_vars )
{
  base_tables const base( num_vars );
  return count_common( gate_signatures( x, base ), gate_signatures( y, base ) );
}

chromosome local_improvement( const chromosome& c, uint32_t num_vars )
{
  return local_improvement( c, base_tables( num_vars ) );
}

chromosome local_improvement( const chromosome& c, const base_tables& base )
{
  auto result = c;
  for ( ;; )
  {
    auto genes = simplifier( result, base ).run();
    if ( std::equal( genes.begin(), genes.end(), result.genes().begin(), result.genes().end() ) )
    {
      return result;
    }
    result = chromosome( std::move( genes ) );
  }
}

harmonize_result harmonize( const chromosome& current, std::span<const chromosome> stored, uint32_t num_vars )
{
  return harmonize( current, stored, base_tables( num_vars ) );
}

harmonize_result harmonize( const chromosome& current, std::span<const chromosome> stored, const base_tables& base )
{
  std::vector<chromosome> all;
  all.reserve( stored.size() + 1u );
  all.push_back( current );
  all.insert( all.end(), stored.begin(), stored.end() );

  for ( int round = 0; round < 8; ++round )
  {
    std::vector<std::vector<truth_table>> tables;
    std::vector<subtree_info> infos;
    tables.reserve( all.size() );
    infos.reserve( all.size() );
    for ( auto const& c : all )
    {
      tables.push_back( evaluate_nodes( c, base ) );
      infos.push_back( analyze( c ) );
    }

    std::unordered_map<truth_table, candidate> best;
    for ( std::size_t ci = 0; ci < all.size(); ++ci )
    {
      auto const& c = all[ci];
      auto const& info = infos[ci];
      for ( std::size_t p = 0; p < c.size(); ++p )
      {
        if ( !c[p].is_gate() )
          continue;
        candidate cand{ ci == 0u, ci != 0u, ci, p, info.gates[p], info.depth[p], info.end[p] - p };
        auto [it, inserted] = best.try_emplace( tables[ci][p], cand );
        if ( inserted )
          continue;
        auto& b = it->second;
        b.in_current = b.in_current || cand.in_current;
        b.in_stored = b.in_stored || cand.in_stored;
        /* (gates, side, length); scan order (current first) settles the rest */
        auto const key = []( const candidate& x ) { return std::tuple{ x.gates, x.chrom == 0u ? 0 : 1, x.length }; };
        if ( key( cand ) < key( b ) )
        {
          auto const flags = std::pair{ b.in_current, b.in_stored };
          b = cand;
          b.in_current = flags.first;
          b.in_stored = flags.second;
        }
      }
    }

    bool changed = false;
    std::vector<chromosome> next;
    next.reserve( all.size() );
    for ( std::size_t ci = 0; ci < all.size(); ++ci )
    {
      auto const& c = all[ci];
      auto const& info = infos[ci];
      std::vector<gene> genes;
      genes.reserve( c.size() );
      std::size_t p = 0;
      while ( p < c.size() )
      {
        if ( c[p].is_gate() )
        {
          auto const& b = best.at( tables[ci][p] );
          if ( b.in_current && b.in_stored && !( b.chrom == ci && b.pos == p ) && b.depth <= info.depth[p] )
          {
            auto const& src = all[b.chrom];
            auto const src_end = infos[b.chrom].end[b.pos];
            bool const same = ( src_end - b.pos ) == ( info.end[p] - p ) &&
                              std::equal( src.genes().begin() + b.pos, src.genes().begin() + src_end, c.genes().begin() + p );
            if ( !same )
            {
              genes.insert( genes.end(), src.genes().begin() + b.pos, src.genes().begin() + src_end );
              p = info.end[p];
              changed = true;
              continue;
            }
          }
        }
        genes.push_back( c[p] );
        ++p;
      }
      next.emplace_back( std::move( genes ) );
    }
    all = std::move( next );
    if ( !changed )
      break;
  }

  harmonize_result r{ std::move( all.front() ), {} };
  r.stored.assign( std::make_move_iterator( all.begin() + 1 ), std::make_move_iterator( all.end() ) );
  return r;
}

} // namespace majsynth
