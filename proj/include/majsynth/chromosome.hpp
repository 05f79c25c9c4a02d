/*!
  \file chromosome.hpp
  \brief Majority/inverter expression trees stored as preorder gene strings

  A chromosome is a single tree: MAJ nodes consume three subtrees, INV nodes
  one, leaves (variables and the constants 0 and 1) none. Because the genes
  are stored in preorder, every subtree occupies a contiguous range.
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/random.hpp>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace majsynth
{

enum class gene_kind : uint8_t
{
  const0,
  const1,
  var,
  inv,
  maj
};

/*! \brief One gene; the integer code is the persisted encoding.

  Codes: 0 -> constant 0, 1 -> constant 1, 2+k -> variable k (k < 10),
  12 -> inverter, 13 -> majority.
*/
class gene
{
public:
  static constexpr uint8_t code_const0 = 0u;
  static constexpr uint8_t code_const1 = 1u;
  static constexpr uint8_t code_var0 = 2u;
  static constexpr uint8_t code_inv = 12u;
  static constexpr uint8_t code_maj = 13u;

  constexpr gene() = default;

  static constexpr gene maj() { return gene( code_maj ); }
  static constexpr gene inv() { return gene( code_inv ); }
  static constexpr gene constant( bool value ) { return gene( value ? code_const1 : code_const0 ); }
  static gene var( uint32_t index );
  /*! \brief Throws decode_error for unknown codes. */
  static gene from_code( uint8_t code );

  constexpr uint8_t code() const { return code_; }
  constexpr gene_kind kind() const
  {
    if ( code_ == code_maj )
      return gene_kind::maj;
    if ( code_ == code_inv )
      return gene_kind::inv;
    if ( code_ == code_const0 )
      return gene_kind::const0;
    if ( code_ == code_const1 )
      return gene_kind::const1;
    return gene_kind::var;
  }
  constexpr uint32_t arity() const
  {
    return code_ == code_maj ? 3u : ( code_ == code_inv ? 1u : 0u );
  }
  constexpr bool is_leaf() const { return arity() == 0u; }
  constexpr bool is_gate() const { return arity() != 0u; }
  constexpr uint32_t var_index() const { return code_ - code_var0; }

  friend constexpr auto operator<=>( gene, gene ) = default;

private:
  constexpr explicit gene( uint8_t code ) : code_( code ) {}
  uint8_t code_ = code_const0;
};

struct metrics
{
  uint32_t n_maj = 0;
  uint32_t n_inv = 0;
  uint32_t levels = 0; /* MAJ nodes on the longest root-to-leaf path */

  uint32_t gates() const { return n_maj + n_inv; }
  friend bool operator==( const metrics&, const metrics& ) = default;
};

class chromosome
{
public:
  /*! \brief The single leaf constant 0. */
  chromosome();

  /*! \brief Validates that `genes` parse as exactly one tree; throws decode_error otherwise. */
  explicit chromosome( std::vector<gene> genes );

  static chromosome leaf( gene g );
  static chromosome make_inv( const chromosome& child );
  static chromosome make_maj( const chromosome& a, const chromosome& b, const chromosome& c );

  std::span<const gene> genes() const { return genes_; }
  std::size_t size() const { return genes_.size(); }
  gene operator[]( std::size_t i ) const { return genes_[i]; }

  /*! \brief One past the last gene of the subtree rooted at `pos`. */
  std::size_t subtree_end( std::size_t pos ) const;

  /*! \brief Copy of the subtree rooted at `pos`. */
  chromosome subtree( std::size_t pos ) const;

  /*! \brief Copy with the subtree at `pos` replaced by `replacement`. */
  chromosome replace_subtree( std::size_t pos, const chromosome& replacement ) const;

  /*! \brief Largest variable index used plus one (0 if there are no variables). */
  uint32_t support_bound() const;

  friend bool operator==( const chromosome&, const chromosome& ) = default;
  friend auto operator<=>( const chromosome&, const chromosome& ) = default;

private:
  struct unchecked_t
  {
  };
  chromosome( std::vector<gene> genes, unchecked_t ) : genes_( std::move( genes ) ) {}

  std::vector<gene> genes_;
};

/*! \brief Exact gene-sequence equality. */
inline bool structurally_equal( const chromosome& a, const chromosome& b )
{
  return a == b;
}

std::vector<uint8_t> encode( const chromosome& c );
chromosome decode( std::span<const uint8_t> codes );

/*! \brief Parses `M(x,y,z)`, variables `A`..`J`, constants `0`/`1` and postfix `'` for inversion.

  The letter `O` is accepted as constant 0. Whitespace is ignored.
*/
chromosome parse_expression( std::string_view text );
std::string to_expression( const chromosome& c );

/*! \brief Function of the tree over `num_vars` variables; throws usage_error if a variable is out of range. */
truth_table evaluate( const chromosome& c, uint32_t num_vars );
truth_table evaluate( const chromosome& c, const base_tables& base );

/*! \brief Table of every subtree, indexed by gene position. */
std::vector<truth_table> evaluate_nodes( const chromosome& c, const base_tables& base );

metrics compute_metrics( const chromosome& c );

/*! \brief Random tree by recursive expansion of uniformly drawn genes.

  Draws exceeding `max_len` are discarded; after 1000 discards a single
  random leaf is returned.
*/
chromosome random_chromosome( uint32_t num_vars, uint32_t max_len, rng_engine& rng );

} // namespace majsynth

template<>
struct std::hash<majsynth::chromosome>
{
  std::size_t operator()( const majsynth::chromosome& c ) const noexcept
  {
    uint64_t h = 0xcbf29ce484222325ull;
    for ( auto g : c.genes() )
    {
      h = ( h ^ g.code() ) * 0x100000001b3ull;
    }
    return static_cast<std::size_t>( h );
  }
};
