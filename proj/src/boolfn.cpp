#include <majsynth/boolfn.hpp>
#include <majsynth/errors.hpp>

#include <algorithm>
#include <bit>
#include <set>

namespace majsynth
{

namespace
{

/* projections of the 6 least significant row-index bits inside one word */
constexpr std::array<uint64_t, 6> projections = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };

void check_arity( uint32_t num_vars )
{
  if ( num_vars < 1u || num_vars > max_num_vars )
  {
    throw usage_error( "truth tables support 1 to " + std::to_string( max_num_vars ) + " variables, got " + std::to_string( num_vars ) );
  }
}

void check_same_arity( const truth_table& a, const truth_table& b )
{
  if ( a.num_vars() != b.num_vars() )
  {
    throw usage_error( "truth table arity mismatch: " + std::to_string( a.num_vars() ) + " vs " + std::to_string( b.num_vars() ) );
  }
}

} // namespace

truth_table::truth_table( uint32_t num_vars )
    : num_vars_( num_vars ), num_words_( num_vars <= 6u ? 1u : ( 1u << ( num_vars - 6u ) ) )
{
  check_arity( num_vars );
}

void truth_table::mask_unused() noexcept
{
  if ( num_vars_ < 6u )
  {
    words_[0] &= ( uint64_t{ 1 } << ( uint64_t{ 1 } << num_vars_ ) ) - 1u;
  }
}

uint64_t truth_table::count_ones() const noexcept
{
  uint64_t n = 0;
  for ( uint32_t i = 0; i < num_words_; ++i )
    n += std::popcount( words_[i] );
  return n;
}

bool truth_table::is_const0() const noexcept
{
  return count_ones() == 0u;
}

bool truth_table::is_const1() const noexcept
{
  return count_ones() == num_rows();
}

std::vector<uint64_t> truth_table::minterms() const
{
  std::vector<uint64_t> result;
  for ( uint64_t r = 0; r < num_rows(); ++r )
    if ( get_bit( r ) )
      result.push_back( r );
  return result;
}

std::string truth_table::to_hex() const
{
  static constexpr char digits[] = "0123456789abcdef";
  auto const num_digits = std::max<uint64_t>( 1u, num_rows() / 4u );
  std::string s;
  s.reserve( num_digits );
  for ( uint64_t d = num_digits; d-- > 0; )
  {
    uint32_t nibble = 0;
    for ( uint32_t b = 0; b < 4u; ++b )
    {
      auto const row = d * 4u + b;
      if ( row < num_rows() && get_bit( row ) )
        nibble |= 1u << b;
    }
    s.push_back( digits[nibble] );
  }
  return s;
}

truth_table truth_table::from_hex( uint32_t num_vars, std::string_view hex )
{
  truth_table t( num_vars );
  auto const num_digits = std::max<uint64_t>( 1u, t.num_rows() / 4u );
  if ( hex.size() != num_digits )
  {
    throw spec_error( "hex table has " + std::to_string( hex.size() ) + " digits, expected " + std::to_string( num_digits ) );
  }
  for ( uint64_t i = 0; i < num_digits; ++i )
  {
    auto const c = hex[i];
    uint32_t v = 0;
    if ( c >= '0' && c <= '9' )
      v = c - '0';
    else if ( c >= 'a' && c <= 'f' )
      v = c - 'a' + 10;
    else if ( c >= 'A' && c <= 'F' )
      v = c - 'A' + 10;
    else
      throw spec_error( std::string( "invalid hex digit '" ) + c + "'" );
    auto const d = num_digits - 1u - i;
    for ( uint32_t b = 0; b < 4u; ++b )
    {
      auto const row = d * 4u + b;
      if ( ( v >> b ) & 1u )
      {
        if ( row >= t.num_rows() )
          throw spec_error( "hex table sets a row beyond 2^n" );
        t.set_bit( row );
      }
    }
  }
  return t;
}

truth_table truth_table::operator~() const noexcept
{
  truth_table r( *this );
  for ( uint32_t i = 0; i < num_words_; ++i )
    r.words_[i] = ~words_[i];
  r.mask_unused();
  return r;
}

truth_table truth_table::operator&( const truth_table& other ) const
{
  check_same_arity( *this, other );
  truth_table r( *this );
  for ( uint32_t i = 0; i < num_words_; ++i )
    r.words_[i] &= other.words_[i];
  return r;
}

truth_table truth_table::operator|( const truth_table& other ) const
{
  check_same_arity( *this, other );
  truth_table r( *this );
  for ( uint32_t i = 0; i < num_words_; ++i )
    r.words_[i] |= other.words_[i];
  return r;
}

truth_table truth_table::operator^( const truth_table& other ) const
{
  check_same_arity( *this, other );
  truth_table r( *this );
  for ( uint32_t i = 0; i < num_words_; ++i )
    r.words_[i] ^= other.words_[i];
  return r;
}

truth_table truth_table::maj( const truth_table& a, const truth_table& b, const truth_table& c )
{
  check_same_arity( a, b );
  check_same_arity( a, c );
  truth_table r( a.num_vars_ );
  for ( uint32_t i = 0; i < a.num_words_; ++i )
  {
    auto const x = a.words_[i], y = b.words_[i], z = c.words_[i];
    r.words_[i] = ( x & y ) | ( y & z ) | ( z & x );
  }
  return r;
}

std::size_t truth_table::hash() const noexcept
{
  uint64_t h = 0x9e3779b97f4a7c15ull ^ num_vars_;
  for ( uint32_t i = 0; i < num_words_; ++i )
  {
    h ^= words_[i] + 0x9e3779b97f4a7c15ull + ( h << 6 ) + ( h >> 2 );
  }
  return static_cast<std::size_t>( h );
}

truth_table nth_var( uint32_t num_vars, uint32_t var )
{
  truth_table t( num_vars );
  if ( var >= num_vars )
  {
    throw usage_error( "variable index " + std::to_string( var ) + " out of range for " + std::to_string( num_vars ) + " variables" );
  }
  auto const bit = num_vars - 1u - var; /* A is the MSB */
  if ( bit < 6u )
  {
    for ( uint32_t i = 0; i < t.num_words(); ++i )
      for ( uint32_t r = 0; r < 64u && i * 64u + r < t.num_rows(); ++r )
        t.set_bit( i * 64u + r, ( projections[bit] >> r ) & 1u );
  }
  else
  {
    for ( uint64_t r = 0; r < t.num_rows(); ++r )
      t.set_bit( r, ( r >> bit ) & 1u );
  }
  return t;
}

truth_table const0( uint32_t num_vars )
{
  return truth_table( num_vars );
}

truth_table const1( uint32_t num_vars )
{
  return ~truth_table( num_vars );
}

base_tables::base_tables( uint32_t num_vars )
    : zero( const0( num_vars ) ), one( const1( num_vars ) )
{
  vars.reserve( num_vars );
  for ( uint32_t v = 0; v < num_vars; ++v )
    vars.push_back( nth_var( num_vars, v ) );
}

uint64_t match_count( const truth_table& a, const truth_table& b )
{
  check_same_arity( a, b );
  return a.num_rows() - ( a ^ b ).count_ones();
}

void circuit_spec::validate() const
{
  if ( num_vars < 1u || num_vars > max_num_vars )
  {
    throw spec_error( "variable count must be between 1 and " + std::to_string( max_num_vars ) + ", got " + std::to_string( num_vars ) );
  }
  if ( outputs.empty() )
  {
    throw spec_error( "at least one output required" );
  }
  std::set<std::string> names;
  for ( auto const& o : outputs )
  {
    if ( !names.insert( o.name ).second )
    {
      throw spec_error( "duplicate output name '" + o.name + "'" );
    }
    (void)from_minterms( o, num_vars );
  }
}

truth_table from_minterms( const output_spec& spec, uint32_t num_vars )
{
  if ( num_vars < 1u || num_vars > max_num_vars )
  {
    throw spec_error( "variable count must be between 1 and " + std::to_string( max_num_vars ) );
  }
  truth_table t( num_vars );
  for ( auto m : spec.minterms )
  {
    if ( m >= t.num_rows() )
    {
      throw spec_error( "output '" + spec.name + "': minterm " + std::to_string( m ) + " out of range for " + std::to_string( num_vars ) + " variables" );
    }
    if ( t.get_bit( m ) )
    {
      throw spec_error( "output '" + spec.name + "': duplicate minterm " + std::to_string( m ) );
    }
    t.set_bit( m );
  }
  return t;
}

} // namespace majsynth
