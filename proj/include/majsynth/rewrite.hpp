/*!
  \file rewrite.hpp
  \brief Functional gate signatures, redundancy removal and cross-chromosome sharing

  Two gates are the same gate when they have the same kind and compute the
  same truth table; structure is irrelevant.
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/chromosome.hpp>

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace majsynth
{

struct gate_signature
{
  gene_kind kind; /* gene_kind::maj or gene_kind::inv */
  truth_table table;

  friend bool operator==( const gate_signature&, const gate_signature& ) = default;
  friend auto operator<=>( const gate_signature&, const gate_signature& ) = default;
};

/*! \brief Sorted, duplicate-free list of gate signatures. */
using signature_set = std::vector<gate_signature>;

signature_set gate_signatures( const chromosome& c, uint32_t num_vars );
signature_set gate_signatures( const chromosome& c, const base_tables& base );
/*! \brief Union of the signatures of all chromosomes. */
signature_set gate_signatures( std::span<const chromosome> cs, const base_tables& base );

struct gate_counts
{
  uint32_t maj = 0;
  uint32_t inv = 0;

  uint32_t total() const { return maj + inv; }
  friend bool operator==( const gate_counts&, const gate_counts& ) = default;
};

gate_counts count_by_kind( const signature_set& s );
/*! \brief Signatures present in both sets, split by kind. */
gate_counts count_common( const signature_set& a, const signature_set& b );

/*! \brief Distinct MAJ and INV signatures present on both sides. */
gate_counts common_gates( std::span<const chromosome> x, std::span<const chromosome> y, uint32_t num_vars );

/*! \brief Removes redundant gates without changing the function.

  Rules, applied bottom-up until nothing changes: a double inversion is
  dropped; a MAJ with two functionally equal operands becomes that operand;
  a MAJ with two complementary operands becomes its third operand; any gate
  whose function is a constant or a single variable becomes that leaf.
  Gate counts and length never grow.
*/
chromosome local_improvement( const chromosome& c, uint32_t num_vars );
chromosome local_improvement( const chromosome& c, const base_tables& base );

struct harmonize_result
{
  chromosome current;
  std::vector<chromosome> stored;
};

/*! \brief Makes functionally equivalent gate subtrees of `current` and `stored` share one implementation.

  For each function computed by a gate subtree on both sides, every subtree
  computing it is replaced by the candidate with the fewest gates; ties
  prefer the current chromosome's candidate and then the shorter one. A
  replacement is skipped if it would deepen the subtree in MAJ levels.
*/
harmonize_result harmonize( const chromosome& current, std::span<const chromosome> stored, uint32_t num_vars );
harmonize_result harmonize( const chromosome& current, std::span<const chromosome> stored, const base_tables& base );

} // namespace majsynth
