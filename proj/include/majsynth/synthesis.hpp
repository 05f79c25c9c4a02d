/*!
  \file synthesis.hpp
  \brief Best-of-R seeded synthesis runs
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/ga.hpp>

#include <cstdint>
#include <vector>

namespace majsynth
{

struct run_summary
{
  uint64_t seed = 0;
  bool success = false;
  uint32_t tmv = 0;
  uint32_t tinv = 0;
  uint32_t tg = 0;
  double weighted_gates = 0.0;
  uint32_t max_level = 0;
};

struct multi_run_result
{
  solution_set best;
  std::vector<run_summary> runs; /* in seed order */
};

/*! \brief True if `a` ranks before `b`: successes first, then max level, weighted gates, tg and seed. */
bool ranks_before( const solution_set& a, const solution_set& b );

/*! \brief Runs seeds `cfg.seed .. cfg.seed + runs - 1` and keeps the best.

  With several runs, `cfg.threads` runs proceed side by side, each
  evaluating fitness sequentially; a single run uses the threads for
  fitness evaluation instead. The result does not depend on the thread
  count.
*/
multi_run_result run_best_of( const circuit_spec& spec, const ga_config& cfg, uint32_t runs );

} // namespace majsynth
