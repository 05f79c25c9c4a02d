/*!
  \file benchmark.hpp
  \brief Embedded five-problem benchmark corpus with published reference numbers
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/ga.hpp>
#include <majsynth/report.hpp>
#include <majsynth/synthesis.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace majsynth
{

struct reference_numbers
{
  std::string source;
  uint32_t tmv = 0;
  uint32_t tinv = 0;
  uint32_t tg = 0;
  uint32_t max_level = 0;
};

struct benchmark_problem
{
  std::string id; /* table1 .. table5 */
  std::string description;
  circuit_spec spec;
  reference_numbers proposed;
  reference_numbers baseline; /* best prior result */
};

const std::vector<benchmark_problem>& benchmark_corpus();

/*! \brief Default GA parameters with outputs ranked by a seeded random permutation, as in the published runs. */
ga_config benchmark_config();

/*! \brief Throws usage_error for unknown ids. */
const benchmark_problem& find_benchmark( const std::string& id );

struct benchmark_row
{
  const benchmark_problem* problem = nullptr;
  run_report report;
  bool met_proposed = false; /* tg and max level no worse than the proposed row */
  bool met_baseline = false; /* tg and max level no worse than the baseline row */
};

benchmark_row run_benchmark( const benchmark_problem& p, const ga_config& cfg, uint32_t runs, bool include_timing = false );

std::string emit_benchmark( const std::vector<benchmark_row>& rows, report_format format );

} // namespace majsynth
