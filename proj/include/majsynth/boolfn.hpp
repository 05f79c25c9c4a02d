/*!
  \file boolfn.hpp
  \brief Word-packed truth tables and minterm lists

  Row index convention: variable 0 (A) is the most significant bit of the
  row index, variable n-1 the least significant. For n = 3 the row index is
  4*A + 2*B + C.
*/

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace majsynth
{

inline constexpr uint32_t max_num_vars = 10u;

class truth_table
{
public:
  static constexpr uint32_t max_words = ( 1u << max_num_vars ) / 64u;

  /*! \brief Constant-0 table over `num_vars` variables (1 <= num_vars <= 10). */
  explicit truth_table( uint32_t num_vars = 1u );

  uint32_t num_vars() const noexcept { return num_vars_; }
  uint64_t num_rows() const noexcept { return uint64_t{ 1 } << num_vars_; }
  uint32_t num_words() const noexcept { return num_words_; }

  bool get_bit( uint64_t row ) const noexcept
  {
    return ( words_[row >> 6] >> ( row & 63u ) ) & 1u;
  }
  void set_bit( uint64_t row, bool value = true ) noexcept
  {
    auto const mask = uint64_t{ 1 } << ( row & 63u );
    if ( value )
      words_[row >> 6] |= mask;
    else
      words_[row >> 6] &= ~mask;
  }

  std::span<const uint64_t> words() const noexcept { return { words_.data(), num_words_ }; }
  uint64_t word( uint32_t i ) const noexcept { return words_[i]; }

  uint64_t count_ones() const noexcept;
  bool is_const0() const noexcept;
  bool is_const1() const noexcept;

  /*! \brief Minterms (row indices of 1-rows) in increasing order. */
  std::vector<uint64_t> minterms() const;

  /*! \brief Big-endian hex string, most significant row first (kitty style). */
  std::string to_hex() const;
  static truth_table from_hex( uint32_t num_vars, std::string_view hex );

  truth_table operator~() const noexcept;
  truth_table operator&( const truth_table& other ) const;
  truth_table operator|( const truth_table& other ) const;
  truth_table operator^( const truth_table& other ) const;

  static truth_table maj( const truth_table& a, const truth_table& b, const truth_table& c );

  friend bool operator==( const truth_table& a, const truth_table& b ) noexcept
  {
    if ( a.num_vars_ != b.num_vars_ )
      return false;
    for ( uint32_t i = 0; i < a.num_words_; ++i )
      if ( a.words_[i] != b.words_[i] )
        return false;
    return true;
  }
  friend std::strong_ordering operator<=>( const truth_table& a, const truth_table& b ) noexcept
  {
    if ( auto c = a.num_vars_ <=> b.num_vars_; c != 0 )
      return c;
    for ( uint32_t i = 0; i < a.num_words_; ++i )
      if ( auto c = a.words_[i] <=> b.words_[i]; c != 0 )
        return c;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const noexcept;

private:
  void mask_unused() noexcept;

  uint32_t num_vars_;
  uint32_t num_words_;
  std::array<uint64_t, max_words> words_{};
};

/*! \brief Table of variable `var` (0 = A = MSB of the row index). */
truth_table nth_var( uint32_t num_vars, uint32_t var );
truth_table const0( uint32_t num_vars );
truth_table const1( uint32_t num_vars );

/*! \brief Leaf semantics for one arity: each variable, then constants. */
struct base_tables
{
  std::vector<truth_table> vars;
  truth_table zero;
  truth_table one;

  explicit base_tables( uint32_t num_vars );
};

/*! \brief Number of rows on which `a` and `b` agree; throws usage_error on arity mismatch. */
uint64_t match_count( const truth_table& a, const truth_table& b );

struct output_spec
{
  std::string name;
  std::vector<uint64_t> minterms;
};

struct circuit_spec
{
  uint32_t num_vars = 0;
  std::vector<output_spec> outputs;

  /*! \brief Checks arity bounds, output count, unique names and minterm ranges. */
  void validate() const;
};

/*! \brief Table that is 1 exactly on the given minterms; throws spec_error on invalid minterms. */
truth_table from_minterms( const output_spec& spec, uint32_t num_vars );

} // namespace majsynth

template<>
struct std::hash<majsynth::truth_table>
{
  std::size_t operator()( const majsynth::truth_table& t ) const noexcept { return t.hash(); }
};
