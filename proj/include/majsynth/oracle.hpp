/*!
  \file oracle.hpp
  \brief Exact minimum-majority synthesis for small functions and solution verification

  The exact engine enumerates, for k = 0, 1, 2, ..., every function that a
  majority tree with exactly k MAJ gates computes. Inverters are free, so a
  function and its complement always cost the same. The first k at which
  the target shows up is its minimum gate count.
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/chromosome.hpp>
#include <majsynth/ga.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace majsynth
{

struct exact_result
{
  truth_table table;
  uint32_t min_maj = 0;
  chromosome witness;
  uint32_t min_level_at_min_maj = 0;
};

/*! \brief Enumeration state shared by any number of queries over one arity.

  Supports up to 3 variables and 7 gates; 4 variables require
  `allow_four_vars` and at most 4 gates.
*/
class exact_synthesizer
{
public:
  exact_synthesizer( uint32_t num_vars, uint32_t max_gates, bool allow_four_vars = false );

  uint32_t num_vars() const { return num_vars_; }
  uint32_t max_gates() const { return max_gates_; }

  /*! \brief Minimum result, or nothing if the target needs more than `max_gates` gates. */
  std::optional<exact_result> find( const truth_table& target );

private:
  static constexpr uint8_t unreachable = 0xff;

  struct back_pointer
  {
    uint32_t operand[3] = { 0, 0, 0 };
    uint8_t cost[3] = { 0, 0, 0 };
    bool complemented = false;
    bool is_leaf = false;
    gene leaf;
  };

  void expand_next();
  chromosome build( uint32_t cost, uint32_t table ) const;
  uint32_t to_index( const truth_table& t ) const;

  uint32_t num_vars_;
  uint32_t max_gates_;
  uint32_t num_rows_;
  uint32_t num_tables_;
  uint32_t mask_;
  /* level_[k][t]: least MAJ depth of a k-gate tree computing t */
  std::vector<std::vector<uint8_t>> level_;
  std::vector<std::vector<back_pointer>> back_;
  std::vector<std::vector<uint32_t>> reached_;
};

std::optional<exact_result> exact_min_majority( const truth_table& target, uint32_t max_gates, bool allow_four_vars = false );

/*! \brief One `<hex table> <min_maj> <witness expression>` line per result. */
void write_exact_cache( std::ostream& os, std::span<const exact_result> results );
std::vector<exact_result> read_exact_cache( std::istream& is, uint32_t num_vars );

struct output_diff
{
  std::string name;
  std::vector<uint64_t> missing; /* rows required by the spec but 0 in the circuit */
  std::vector<uint64_t> extra;   /* rows 1 in the circuit but absent from the spec */
};

struct verification
{
  bool pass = true;
  std::vector<output_diff> diffs; /* mismatching outputs only */
};

/*! \brief Compares every output's function with its minterm list; throws usage_error on output-count mismatch. */
verification verify_chromosomes( std::span<const chromosome> outputs, const circuit_spec& spec );
verification verify_solution( const solution_set& s, const circuit_spec& spec );

} // namespace majsynth
