#include <majsynth/errors.hpp>
#include <majsynth/problem.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace majsynth
{

namespace
{

/* a token together with its 1-based column */
struct token
{
  std::string_view text;
  std::size_t column;
};

bool is_space( char c )
{
  return c == ' ' || c == '\t' || c == '\r';
}

/* splits on whitespace; `=` and `,` are separate tokens */
std::vector<token> tokenize( std::string_view line )
{
  std::vector<token> tokens;
  std::size_t i = 0;
  while ( i < line.size() )
  {
    if ( is_space( line[i] ) )
    {
      ++i;
      continue;
    }
    if ( line[i] == '=' || line[i] == ',' )
    {
      tokens.push_back( { line.substr( i, 1 ), i + 1u } );
      ++i;
      continue;
    }
    auto const begin = i;
    while ( i < line.size() && !is_space( line[i] ) && line[i] != '=' && line[i] != ',' )
      ++i;
    tokens.push_back( { line.substr( begin, i - begin ), begin + 1u } );
  }
  return tokens;
}

template<typename T>
bool parse_number( std::string_view text, T& value )
{
  auto const* end = text.data() + text.size();
  auto const [ptr, ec] = std::from_chars( text.data(), end, value );
  return ec == std::errc{} && ptr == end;
}

template<typename T>
T require_number( const std::string& key, const std::string& value )
{
  T v{};
  if ( !parse_number( value, v ) )
    throw config_error( "malformed value '" + value + "' for '" + key + "'" );
  return v;
}

} // namespace

std::string to_string( output_order order )
{
  return order == output_order::as_given ? "as-given" : "seeded-random";
}

output_order parse_output_order( const std::string& text )
{
  if ( text == "as-given" )
    return output_order::as_given;
  if ( text == "seeded-random" )
    return output_order::seeded_random;
  throw config_error( "unknown output order '" + text + "' (expected as-given or seeded-random)" );
}

void apply_setting( ga_config& cfg, const std::string& key, const std::string& value )
{
  if ( key == "pop" )
    cfg.pop = require_number<uint32_t>( key, value );
  else if ( key == "elite" )
    cfg.elite_frac = require_number<double>( key, value );
  else if ( key == "max-gen" )
    cfg.max_gen = require_number<uint32_t>( key, value );
  else if ( key == "xover" )
    cfg.crossover_rate_initial = require_number<double>( key, value );
  else if ( key == "xover-valid" )
    cfg.crossover_rate_after_valid = require_number<double>( key, value );
  else if ( key == "tournament" )
    cfg.tournament_size = require_number<uint32_t>( key, value );
  else if ( key == "stagnation" )
    cfg.thresh_gen = require_number<uint32_t>( key, value );
  else if ( key == "max-len" )
    cfg.max_len = require_number<uint32_t>( key, value );
  else if ( key == "seed" )
    cfg.seed = require_number<uint64_t>( key, value );
  else if ( key == "order" )
    cfg.order = parse_output_order( value );
  else
    throw config_error( "unknown setting '" + key + "'" );
}

void apply_settings( ga_config& cfg, const std::vector<setting>& settings )
{
  for ( auto const& s : settings )
    apply_setting( cfg, s.key, s.value );
}

problem parse_problem( std::string_view text )
{
  problem p;
  bool have_vars = false;
  std::set<std::string, std::less<>> names;
  std::size_t line_no = 0;

  while ( !text.empty() )
  {
    auto const nl = text.find( '\n' );
    auto line = text.substr( 0, nl );
    text = nl == std::string_view::npos ? std::string_view{} : text.substr( nl + 1u );
    ++line_no;
    if ( auto const hash = line.find( '#' ); hash != std::string_view::npos )
      line = line.substr( 0, hash );
    auto const tokens = tokenize( line );
    if ( tokens.empty() )
      continue;

    auto const fail = [&]( std::size_t column, const std::string& message ) {
      throw parse_error( line_no, column, message );
    };
    auto const end_column = line.size() + 1u;
    auto const& head = tokens[0];

    if ( head.text == "vars" )
    {
      if ( have_vars )
        fail( head.column, "duplicate 'vars' line" );
      if ( tokens.size() != 2u )
        fail( tokens.size() < 2u ? end_column : tokens[2].column, "expected 'vars <count>'" );
      uint32_t n = 0;
      if ( !parse_number( tokens[1].text, n ) )
        fail( tokens[1].column, "malformed number '" + std::string( tokens[1].text ) + "'" );
      if ( n < 1u || n > max_num_vars )
        fail( tokens[1].column, "variable count must be between 1 and " + std::to_string( max_num_vars ) );
      p.spec.num_vars = n;
      have_vars = true;
    }
    else if ( head.text == "out" )
    {
      if ( !have_vars )
        fail( head.column, "'out' before 'vars'" );
      if ( tokens.size() < 3u || tokens[2].text != "=" )
        fail( tokens.size() < 3u ? end_column : tokens[2].column, "expected 'out <name> = m1,m2,...'" );
      auto const name = std::string( tokens[1].text );
      if ( name == "=" || name == "," )
        fail( tokens[1].column, "missing output name" );
      if ( names.contains( name ) )
        fail( tokens[1].column, "duplicate output name '" + name + "'" );
      names.insert( name );

      output_spec out{ name, {} };
      std::set<uint64_t> seen;
      auto const rows = uint64_t{ 1 } << p.spec.num_vars;
      /* minterm list: number (',' number)*; an empty list is the constant 0 */
      for ( std::size_t i = 3; i < tokens.size(); ++i )
      {
        auto const expect_number = ( i - 3u ) % 2u == 0u;
        auto const& t = tokens[i];
        if ( !expect_number )
        {
          if ( t.text != "," )
            fail( t.column, "expected ',' between minterms" );
          if ( i + 1u == tokens.size() )
            fail( end_column, "trailing ',' in minterm list of output '" + name + "'" );
          continue;
        }
        uint64_t m = 0;
        if ( !parse_number( t.text, m ) )
          fail( t.column, "malformed minterm '" + std::string( t.text ) + "' in output '" + name + "'" );
        if ( m >= rows )
          fail( t.column, "output '" + name + "': minterm " + std::to_string( m ) + " out of range for " +
                              std::to_string( p.spec.num_vars ) + " variables" );
        if ( !seen.insert( m ).second )
          fail( t.column, "output '" + name + "': duplicate minterm " + std::to_string( m ) );
        out.minterms.push_back( m );
      }
      p.spec.outputs.push_back( std::move( out ) );
    }
    else if ( head.text == "set" )
    {
      if ( tokens.size() != 3u )
        fail( tokens.size() < 3u ? end_column : tokens[3].column, "expected 'set <key> <value>'" );
      setting s{ std::string( tokens[1].text ), std::string( tokens[2].text ) };
      ga_config scratch;
      try
      {
        apply_setting( scratch, s.key, s.value );
      }
      catch ( const config_error& e )
      {
        fail( e.what() == "unknown setting '" + s.key + "'" ? tokens[1].column : tokens[2].column, e.what() );
      }
      p.settings.push_back( std::move( s ) );
    }
    else
    {
      fail( head.column, "unknown directive '" + std::string( head.text ) + "'" );
    }
  }

  if ( !have_vars )
    throw parse_error( line_no + 1u, 1, "missing 'vars' line" );
  if ( p.spec.outputs.empty() )
    throw parse_error( line_no + 1u, 1, "at least one output required" );
  return p;
}

problem load_problem( const std::string& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw std::runtime_error( "cannot open '" + path + "'" );
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem( ss.str() );
}

std::string format_problem( const circuit_spec& spec )
{
  std::string text = "vars " + std::to_string( spec.num_vars ) + "\n";
  for ( auto const& o : spec.outputs )
  {
    text += "out " + o.name + " =";
    for ( std::size_t i = 0; i < o.minterms.size(); ++i )
      text += ( i == 0u ? " " : "," ) + std::to_string( o.minterms[i] );
    text += "\n";
  }
  return text;
}

} // namespace majsynth
