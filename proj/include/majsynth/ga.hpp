/*!
  \file ga.hpp
  \brief Elitist genetic algorithm over majority/inverter trees

  Each generation consists of the elite chromosomes carried over unchanged,
  crossover children from tournament-selected parents, and freshly generated
  random chromosomes (mutation children). Outputs of a multi-output problem
  are processed in rank order; every output after the first is scored
  against stored combined solutions of the outputs before it.
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/chromosome.hpp>
#include <majsynth/fitness.hpp>
#include <majsynth/random.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace majsynth
{

enum class output_order
{
  as_given,
  seeded_random
};

struct ga_config
{
  uint32_t pop = 200;
  double elite_frac = 0.10;
  uint32_t max_gen = 5000;
  double crossover_rate_initial = 0.70;
  double crossover_rate_after_valid = 0.80;
  uint32_t tournament_size = 3;
  uint32_t thresh_gen = 300;
  uint32_t max_len = 40;
  uint64_t seed = 1;
  output_order order = output_order::as_given;

  /* candidates drawn per requested chromosome when sampling random batches */
  uint32_t batch_factor = 10;
  /* cap on stored rows kept per output */
  uint32_t max_stored_rows = 500;
  /* fitness evaluation threads; results do not depend on it */
  uint32_t threads = 1;
};

/*! \brief Throws config_error unless 0 < elites < pop and all rates and sizes are usable. */
void validate( const ga_config& cfg );

uint32_t elite_count( const ga_config& cfg );
uint32_t crossover_count( const ga_config& cfg, bool valid_found );

struct individual
{
  chromosome genes;
  double fitness = 0.0;
};

using fitness_function = std::function<double( const chromosome& )>;

/*! \brief Draws `batch_factor * count` random chromosomes, drops structural duplicates and samples `count`.

  Draws more if the batch has fewer than `count` distinct chromosomes.
*/
std::vector<chromosome> sample_random_batch( std::size_t count, uint32_t num_vars, const ga_config& cfg, rng_engine& rng );

std::vector<chromosome> init_population( uint32_t num_vars, const ga_config& cfg, rng_engine& rng );

std::vector<chromosome> mutation_children( std::size_t count, uint32_t num_vars, const ga_config& cfg, rng_engine& rng );

/*! \brief Index of the fittest of `size` uniformly drawn members (with replacement; ties go to the earliest draw). */
std::size_t tournament_select( std::span<const individual> population, uint32_t size, rng_engine& rng );

struct offspring_pair
{
  chromosome first;
  chromosome second;
};

/*! \brief Swaps uniformly chosen subtrees (roots included) of the parents.

  Node pairs are redrawn up to 10 times while either offspring exceeds
  `max_len`; returns nothing if all draws overflow.
*/
std::optional<offspring_pair> exchange_subtrees( const chromosome& p1, const chromosome& p2, uint32_t max_len, rng_engine& rng );

/*! \brief Subtree crossover with local improvement; returns the fitter offspring.

  Falls back to a copy of the fitter parent if no exchange fits in `max_len`.
*/
individual crossover( const individual& p1, const individual& p2, const fitness_function& fitness, uint32_t num_vars,
                      const ga_config& cfg, rng_engine& rng );

/*! \brief Called once per generation with the population sorted by fitness. */
using generation_observer = std::function<void( uint32_t generation, std::span<const individual> population )>;

struct evolution_result
{
  bool found_valid = false;
  individual best;
  uint32_t generations = 0;
  std::vector<double> best_history;
};

/*! \brief Runs the generation loop with the given fitness.

  Stops after `max_gen` generations, or once the best fitness is below 1
  and has not changed for `thresh_gen` consecutive generations.
  `stream_index` separates the random streams of different outputs.
*/
evolution_result evolve( uint32_t num_vars, const fitness_function& fitness, const ga_config& cfg, uint64_t stream_index,
                         const generation_observer& observer = {} );

/*! \brief Keeps valid per-generation bests: deduplicated and capped, evicting the worst fitness first. */
class row_archive
{
public:
  explicit row_archive( std::size_t capacity ) : capacity_( capacity ) {}

  /*! \brief Returns false for duplicates and for rows that lose against a full archive. */
  bool add( stored_row row );

  const std::vector<stored_row>& rows() const { return rows_; }
  std::vector<stored_row> release() { return std::move( rows_ ); }

private:
  std::size_t capacity_;
  std::vector<stored_row> rows_;
};

struct single_output_result
{
  evolution_result evolution;
  std::vector<stored_row> generation_bests;
};

single_output_result run_single_output( const truth_table& target, const ga_config& cfg, uint64_t stream_index = 0,
                                        const generation_observer& observer = {} );

struct synthesis_failure
{
  std::string output;
  std::string message;
};

/*! \brief Result of a complete synthesis run; outputs are in problem order. */
struct solution_set
{
  uint32_t num_vars = 0;
  std::vector<std::string> names;
  std::vector<chromosome> chromosomes;
  combined_metrics metrics;
  std::vector<uint32_t> generations;
  std::vector<std::size_t> rank_order; /* problem indices in processing order */
  uint64_t seed = 0;
  double elapsed_seconds = 0.0;
  std::optional<synthesis_failure> failure;

  bool success() const { return !failure.has_value(); }
};

solution_set run_multi_output( const circuit_spec& spec, const ga_config& cfg );

} // namespace majsynth
