/*!
  \file report.hpp
  \brief Run reports as canonical JSON or as a plain-text table

  JSON objects are written with sorted keys and no volatile fields, so a
  report is a pure function of problem, configuration and seed. Wall time
  appears only when explicitly requested. See docs/report-schema.md.
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/ga.hpp>
#include <majsynth/synthesis.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace majsynth
{

enum class report_format
{
  json,
  table
};

report_format parse_report_format( const std::string& text );

struct output_report
{
  std::string name;
  std::string expression;
  uint32_t nmv = 0;
  uint32_t ninv = 0;
  uint32_t levels = 0;
};

struct global_report
{
  uint32_t cmv = 0;
  uint32_t cinv = 0;
  uint32_t tmv = 0;
  uint32_t tinv = 0;
  uint32_t tg = 0;
  double weighted_gates = 0.0;
  uint32_t max_level = 0;
};

struct run_report
{
  uint32_t num_vars = 0;
  std::vector<std::string> output_names;
  std::vector<output_report> outputs; /* empty on failure */
  std::optional<global_report> global;
  std::optional<synthesis_failure> failure;
  std::string verification = "not-run";
  uint64_t seed = 0;
  std::vector<uint32_t> generations; /* per output, problem order */
  std::vector<run_summary> runs;
  ga_config config;
  uint32_t run_count = 1;
  std::optional<double> wall_time_seconds;

  bool success() const { return !failure.has_value(); }
};

/*! \brief Builds the report and verifies every output against the spec.

  Throws std::logic_error if a successful solution does not verify.
*/
run_report make_report( const multi_run_result& result, const circuit_spec& spec, const ga_config& cfg, uint32_t runs,
                        bool include_timing = false );

nlohmann::json to_json( const ga_config& cfg );
nlohmann::json to_json( const run_report& report );

/*! \brief Canonical JSON (sorted keys, two-space indent, trailing newline) or the table layout. */
std::string emit_report( const run_report& report, report_format format );

/*! \brief Expression strings of a JSON report, in report order. */
std::vector<std::pair<std::string, std::string>> report_expressions( const nlohmann::json& report );

/*! \brief Right-aligned plain-text table; `rows` are cells without the header. */
std::string format_table( const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows );

std::string format_number( double value );

} // namespace majsynth
