#include <majsynth/chromosome.hpp>
#include <majsynth/errors.hpp>

#include <algorithm>
#include <cctype>

namespace majsynth
{

gene gene::var( uint32_t index )
{
  if ( index >= max_num_vars )
  {
    throw usage_error( "variable index " + std::to_string( index ) + " exceeds the supported maximum" );
  }
  return gene( static_cast<uint8_t>( code_var0 + index ) );
}

gene gene::from_code( uint8_t code )
{
  if ( code > code_maj )
  {
    throw decode_error( "unknown gene code " + std::to_string( code ) );
  }
  return gene( code );
}

chromosome::chromosome() : genes_{ gene::constant( false ) } {}

chromosome::chromosome( std::vector<gene> genes ) : genes_( std::move( genes ) )
{
  if ( genes_.empty() )
  {
    throw decode_error( "empty gene sequence" );
  }
  std::size_t open = 1;
  for ( std::size_t i = 0; i < genes_.size(); ++i )
  {
    if ( open == 0 )
    {
      throw decode_error( "trailing genes after complete tree at position " + std::to_string( i ) );
    }
    open = open - 1 + genes_[i].arity();
  }
  if ( open != 0 )
  {
    throw decode_error( "incomplete tree: " + std::to_string( open ) + " operand(s) missing" );
  }
}

chromosome chromosome::leaf( gene g )
{
  if ( !g.is_leaf() )
  {
    throw usage_error( "leaf() requires a variable or constant gene" );
  }
  return chromosome( { g }, unchecked_t{} );
}

chromosome chromosome::make_inv( const chromosome& child )
{
  std::vector<gene> genes;
  genes.reserve( child.size() + 1u );
  genes.push_back( gene::inv() );
  genes.insert( genes.end(), child.genes_.begin(), child.genes_.end() );
  return chromosome( std::move( genes ), unchecked_t{} );
}

chromosome chromosome::make_maj( const chromosome& a, const chromosome& b, const chromosome& c )
{
  std::vector<gene> genes;
  genes.reserve( a.size() + b.size() + c.size() + 1u );
  genes.push_back( gene::maj() );
  for ( auto const* x : { &a, &b, &c } )
    genes.insert( genes.end(), x->genes_.begin(), x->genes_.end() );
  return chromosome( std::move( genes ), unchecked_t{} );
}

std::size_t chromosome::subtree_end( std::size_t pos ) const
{
  std::size_t open = 1;
  while ( open > 0 )
  {
    open = open - 1 + genes_[pos].arity();
    ++pos;
  }
  return pos;
}

chromosome chromosome::subtree( std::size_t pos ) const
{
  auto const end = subtree_end( pos );
  return chromosome( std::vector<gene>( genes_.begin() + pos, genes_.begin() + end ), unchecked_t{} );
}

chromosome chromosome::replace_subtree( std::size_t pos, const chromosome& replacement ) const
{
  auto const end = subtree_end( pos );
  std::vector<gene> genes;
  genes.reserve( genes_.size() - ( end - pos ) + replacement.size() );
  genes.insert( genes.end(), genes_.begin(), genes_.begin() + pos );
  genes.insert( genes.end(), replacement.genes_.begin(), replacement.genes_.end() );
  genes.insert( genes.end(), genes_.begin() + end, genes_.end() );
  return chromosome( std::move( genes ), unchecked_t{} );
}

uint32_t chromosome::support_bound() const
{
  uint32_t bound = 0;
  for ( auto g : genes_ )
    if ( g.kind() == gene_kind::var )
      bound = std::max( bound, g.var_index() + 1u );
  return bound;
}

std::vector<uint8_t> encode( const chromosome& c )
{
  std::vector<uint8_t> codes;
  codes.reserve( c.size() );
  for ( auto g : c.genes() )
    codes.push_back( g.code() );
  return codes;
}

chromosome decode( std::span<const uint8_t> codes )
{
  std::vector<gene> genes;
  genes.reserve( codes.size() );
  for ( auto code : codes )
    genes.push_back( gene::from_code( code ) );
  return chromosome( std::move( genes ) );
}

namespace
{

class expression_parser
{
public:
  explicit expression_parser( std::string_view text )
  {
    for ( std::size_t i = 0; i < text.size(); ++i )
    {
      if ( !std::isspace( static_cast<unsigned char>( text[i] ) ) )
      {
        chars_.push_back( text[i] );
        offsets_.push_back( i );
      }
    }
  }

  chromosome parse()
  {
    parse_expr();
    if ( pos_ != chars_.size() )
    {
      fail( "unexpected trailing input" );
    }
    return chromosome( std::move( genes_ ) );
  }

private:
  void parse_expr()
  {
    auto const start = genes_.size();
    parse_primary();
    while ( peek() == '\'' )
    {
      ++pos_;
      genes_.insert( genes_.begin() + start, gene::inv() );
    }
  }

  void parse_primary()
  {
    auto const c = peek();
    if ( c == 'M' )
    {
      ++pos_;
      expect( '(' );
      genes_.push_back( gene::maj() );
      parse_expr();
      expect( ',' );
      parse_expr();
      expect( ',' );
      parse_expr();
      expect( ')' );
    }
    else if ( c >= 'A' && c <= 'J' )
    {
      ++pos_;
      genes_.push_back( gene::var( static_cast<uint32_t>( c - 'A' ) ) );
    }
    else if ( c == '0' || c == 'O' )
    {
      ++pos_;
      genes_.push_back( gene::constant( false ) );
    }
    else if ( c == '1' )
    {
      ++pos_;
      genes_.push_back( gene::constant( true ) );
    }
    else
    {
      fail( c == '\0' ? "unexpected end of expression" : std::string( "unexpected character '" ) + c + "'" );
    }
  }

  char peek() const { return pos_ < chars_.size() ? chars_[pos_] : '\0'; }

  void expect( char c )
  {
    if ( peek() != c )
    {
      fail( std::string( "expected '" ) + c + "'" );
    }
    ++pos_;
  }

  [[noreturn]] void fail( const std::string& message ) const
  {
    auto const offset = pos_ < offsets_.size() ? offsets_[pos_] : ( offsets_.empty() ? 0u : offsets_.back() + 1u );
    throw decode_error( "expression offset " + std::to_string( offset ) + ": " + message );
  }

  std::vector<char> chars_;
  std::vector<std::size_t> offsets_;
  std::size_t pos_ = 0;
  std::vector<gene> genes_;
};

std::size_t write_expression( const chromosome& c, std::size_t pos, std::string& out )
{
  auto const g = c[pos];
  switch ( g.kind() )
  {
  case gene_kind::const0:
    out.push_back( '0' );
    return pos + 1u;
  case gene_kind::const1:
    out.push_back( '1' );
    return pos + 1u;
  case gene_kind::var:
    out.push_back( static_cast<char>( 'A' + g.var_index() ) );
    return pos + 1u;
  case gene_kind::inv:
  {
    auto const end = write_expression( c, pos + 1u, out );
    out.push_back( '\'' );
    return end;
  }
  case gene_kind::maj:
  default:
  {
    out += "M(";
    auto p = write_expression( c, pos + 1u, out );
    out.push_back( ',' );
    p = write_expression( c, p, out );
    out.push_back( ',' );
    p = write_expression( c, p, out );
    out.push_back( ')' );
    return p;
  }
  }
}

const truth_table& leaf_table( gene g, const base_tables& base )
{
  switch ( g.kind() )
  {
  case gene_kind::const0:
    return base.zero;
  case gene_kind::const1:
    return base.one;
  default:
    if ( g.var_index() >= base.vars.size() )
    {
      throw usage_error( "variable " + std::string( 1, static_cast<char>( 'A' + g.var_index() ) ) + " out of range for " + std::to_string( base.vars.size() ) + " variables" );
    }
    return base.vars[g.var_index()];
  }
}

} // namespace

chromosome parse_expression( std::string_view text )
{
  return expression_parser( text ).parse();
}

std::string to_expression( const chromosome& c )
{
  std::string out;
  write_expression( c, 0u, out );
  return out;
}

truth_table evaluate( const chromosome& c, uint32_t num_vars )
{
  return evaluate( c, base_tables( num_vars ) );
}

truth_table evaluate( const chromosome& c, const base_tables& base )
{
  std::vector<truth_table> stack;
  stack.reserve( c.size() );
  for ( std::size_t i = c.size(); i-- > 0; )
  {
    auto const g = c[i];
    if ( g.is_leaf() )
    {
      stack.push_back( leaf_table( g, base ) );
    }
    else if ( g.kind() == gene_kind::inv )
    {
      stack.back() = ~stack.back();
    }
    else
    {
      /* in a reversed preorder scan the first operand is on top */
      auto const n = stack.size();
      stack[n - 3u] = truth_table::maj( stack[n - 1u], stack[n - 2u], stack[n - 3u] );
      stack.resize( n - 2u );
    }
  }
  return stack.back();
}

std::vector<truth_table> evaluate_nodes( const chromosome& c, const base_tables& base )
{
  std::vector<truth_table> tables( c.size(), base.zero );
  std::vector<std::size_t> stack;
  stack.reserve( c.size() );
  for ( std::size_t i = c.size(); i-- > 0; )
  {
    auto const g = c[i];
    if ( g.is_leaf() )
    {
      tables[i] = leaf_table( g, base );
    }
    else if ( g.kind() == gene_kind::inv )
    {
      tables[i] = ~tables[stack.back()];
      stack.pop_back();
    }
    else
    {
      auto const n = stack.size();
      tables[i] = truth_table::maj( tables[stack[n - 1u]], tables[stack[n - 2u]], tables[stack[n - 3u]] );
      stack.resize( n - 3u );
    }
    stack.push_back( i );
  }
  return tables;
}

metrics compute_metrics( const chromosome& c )
{
  metrics m;
  std::vector<uint32_t> levels;
  levels.reserve( c.size() );
  for ( std::size_t i = c.size(); i-- > 0; )
  {
    auto const g = c[i];
    if ( g.is_leaf() )
    {
      levels.push_back( 0u );
    }
    else if ( g.kind() == gene_kind::inv )
    {
      ++m.n_inv;
    }
    else
    {
      ++m.n_maj;
      auto const n = levels.size();
      auto const l = 1u + std::max( { levels[n - 1u], levels[n - 2u], levels[n - 3u] } );
      levels.resize( n - 2u );
      levels.back() = l;
    }
  }
  m.levels = levels.back();
  return m;
}

chromosome random_chromosome( uint32_t num_vars, uint32_t max_len, rng_engine& rng )
{
  if ( num_vars < 1u || num_vars > max_num_vars || max_len < 1u )
  {
    throw usage_error( "random_chromosome requires 1 <= num_vars <= 10 and max_len >= 1" );
  }
  /* symbols: MAJ, INV, each variable, 0, 1 */
  auto const num_symbols = num_vars + 4u;
  auto const draw = [&]() {
    auto const s = static_cast<uint32_t>( uniform_index( rng, num_symbols ) );
    if ( s == 0u )
      return gene::maj();
    if ( s == 1u )
      return gene::inv();
    if ( s == 2u )
      return gene::constant( false );
    if ( s == 3u )
      return gene::constant( true );
    return gene::var( s - 4u );
  };

  std::vector<gene> genes;
  for ( int attempt = 0; attempt < 1000; ++attempt )
  {
    genes.clear();
    std::size_t open = 1;
    /* every open operand needs at least one more gene, so abort as soon as the string cannot fit */
    while ( open > 0 && genes.size() + open <= max_len )
    {
      auto const g = draw();
      genes.push_back( g );
      open = open - 1 + g.arity();
    }
    if ( open == 0 )
    {
      return chromosome( std::move( genes ) );
    }
  }
  auto const leaf = static_cast<uint32_t>( uniform_index( rng, num_vars + 2u ) );
  return chromosome::leaf( leaf < num_vars ? gene::var( leaf ) : gene::constant( leaf == num_vars + 1u ) );
}

} // namespace majsynth
