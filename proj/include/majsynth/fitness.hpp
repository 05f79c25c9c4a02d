/*!
  \file fitness.hpp
  \brief Single-output and shared multi-output fitness, with stored solution rows

  Lower fitness is better. A value below 1 means the chromosome realizes its
  target exactly; an incorrect chromosome scores 2^n / (matching rows), so
  it is always at least 1.
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/chromosome.hpp>
#include <majsynth/rewrite.hpp>

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace majsynth
{

/*! \brief Score of valid chromosomes without any gate or without any level. */
inline constexpr double degenerate_valid_fitness = -3.0;

/*! \brief 2^n / matches, or 2^(n+1) when nothing matches. */
double mismatch_fitness( uint64_t matches, uint64_t rows );

/*! \brief 1 - (1/gates + 1/levels), or the degenerate score if either is zero. */
double valid_fitness( uint32_t gates, uint32_t levels );

inline bool is_valid_fitness( double value ) { return value < 1.0; }

double fitness1( const chromosome& c, const truth_table& target );
double fitness1( const chromosome& c, const truth_table& target, const base_tables& base );

/*! \brief Metrics of a set of output chromosomes combined into one circuit.

  Totals count distinct gate signatures over all outputs. The common counts
  are the gates saved by sharing: the sum of per-output gate counts minus
  the distinct total.
*/
struct combined_metrics
{
  std::vector<metrics> outputs;
  uint32_t total_maj = 0;
  uint32_t total_inv = 0;
  uint32_t tg = 0;
  double weighted_gates = 0.0; /* total_maj + total_inv / 3 */
  uint32_t max_level = 0;
  uint32_t common_maj = 0;
  uint32_t common_inv = 0;

  friend bool operator==( const combined_metrics&, const combined_metrics& ) = default;
};

combined_metrics compute_combined_metrics( std::span<const chromosome> outputs, const base_tables& base );

/*! \brief A candidate combined solution for the outputs ranked before the current one. */
struct stored_row
{
  std::vector<chromosome> chromosomes;
  uint32_t unique_maj = 0;
  uint32_t unique_inv = 0;
  uint32_t max_level = 0;
  double fitness = 0.0;
  signature_set signatures;
};

stored_row make_stored_row( std::vector<chromosome> chromosomes, const base_tables& base, double fitness );

combined_metrics compute_combined_metrics( const stored_row& row, const chromosome& c, const base_tables& base );

struct fitness2_result
{
  double value = 0.0;
  std::optional<std::size_t> row;
  combined_metrics metrics;
  /* harmonized chromosomes of the selected row followed by the harmonized current one */
  std::vector<chromosome> combined;
};

/*! \brief Stored rows for one output's run plus the memo of valid results.

  The memo is keyed by gene sequence and is only meaningful for the current
  rows, so replacing the rows clears it. Lookups and inserts are safe from
  several threads.
*/
class fitness_context
{
public:
  fitness_context( uint32_t num_vars, std::vector<stored_row> rows );

  fitness_context( const fitness_context& ) = delete;
  fitness_context& operator=( const fitness_context& ) = delete;

  uint32_t num_vars() const { return static_cast<uint32_t>( base_.vars.size() ); }
  const base_tables& base() const { return base_; }
  const std::vector<stored_row>& rows() const { return rows_; }

  void replace_rows( std::vector<stored_row> rows );

  std::shared_ptr<const fitness2_result> find( const chromosome& c ) const;
  /*! \brief Insert-if-absent; returns the entry that ends up in the memo. */
  std::shared_ptr<const fitness2_result> insert( const chromosome& c, std::shared_ptr<const fitness2_result> result );

  std::size_t memo_size() const;
  uint64_t memo_hits() const { return hits_.load(); }
  uint64_t memo_misses() const { return misses_.load(); }

private:
  friend std::shared_ptr<const fitness2_result> fitness2( const chromosome&, const truth_table&, fitness_context& );

  base_tables base_;
  std::vector<stored_row> rows_;
  mutable std::mutex mutex_;
  std::unordered_map<chromosome, std::shared_ptr<const fitness2_result>> memo_;
  mutable std::atomic<uint64_t> hits_{ 0 };
  mutable std::atomic<uint64_t> misses_{ 0 };
};

/*! \brief Fitness of `c` for the current output given the stored rows of earlier outputs.

  Selects the row minimizing the combined level and then the weighted
  gate count (inverters count one third), merges shared subtrees with that
  row and scores the merged circuit. Throws usage_error without rows.
*/
std::shared_ptr<const fitness2_result> fitness2( const chromosome& c, const truth_table& target, fitness_context& ctx );

} // namespace majsynth
