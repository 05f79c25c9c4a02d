#include <majsynth/chromosome.hpp>
#include <majsynth/errors.hpp>
#include <majsynth/oracle.hpp>
#include <majsynth/problem.hpp>
#include <majsynth/report.hpp>

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace majsynth
{

report_format parse_report_format( const std::string& text )
{
  if ( text == "json" )
    return report_format::json;
  if ( text == "table" )
    return report_format::table;
  throw usage_error( "unknown format '" + text + "' (expected json or table)" );
}

run_report make_report( const multi_run_result& result, const circuit_spec& spec, const ga_config& cfg, uint32_t runs,
                        bool include_timing )
{
  auto const& s = result.best;
  run_report r;
  r.num_vars = spec.num_vars;
  for ( auto const& o : spec.outputs )
    r.output_names.push_back( o.name );
  r.seed = s.seed;
  r.generations = s.generations;
  r.runs = result.runs;
  r.config = cfg;
  r.run_count = runs;
  if ( include_timing )
    r.wall_time_seconds = s.elapsed_seconds;

  if ( !s.success() )
  {
    r.failure = s.failure;
    return r;
  }

  auto const v = verify_solution( s, spec );
  if ( !v.pass )
    throw std::logic_error( "synthesized circuit for '" + v.diffs.front().name + "' failed verification" );
  r.verification = "pass";

  for ( std::size_t i = 0; i < s.chromosomes.size(); ++i )
  {
    auto const& m = s.metrics.outputs[i];
    r.outputs.push_back( { s.names[i], to_expression( s.chromosomes[i] ), m.n_maj, m.n_inv, m.levels } );
  }
  auto const& m = s.metrics;
  r.global = global_report{ m.common_maj, m.common_inv, m.total_maj, m.total_inv, m.tg, m.weighted_gates, m.max_level };
  return r;
}

nlohmann::json to_json( const ga_config& cfg )
{
  /* thread count is left out: it never changes results */
  return { { "pop", cfg.pop },
           { "elite", cfg.elite_frac },
           { "max_gen", cfg.max_gen },
           { "xover", cfg.crossover_rate_initial },
           { "xover_valid", cfg.crossover_rate_after_valid },
           { "tournament", cfg.tournament_size },
           { "stagnation", cfg.thresh_gen },
           { "max_len", cfg.max_len },
           { "seed", cfg.seed },
           { "order", to_string( cfg.order ) } };
}

nlohmann::json to_json( const run_report& report )
{
  nlohmann::json j;
  j["status"] = report.success() ? "success" : "failure";
  j["num_vars"] = report.num_vars;
  j["seed"] = report.seed;
  j["config"] = to_json( report.config );
  j["config"]["runs"] = report.run_count;

  auto& gens = j["generations"] = nlohmann::json::object();
  for ( std::size_t i = 0; i < report.output_names.size(); ++i )
    gens[report.output_names[i]] = report.generations[i];

  auto& runs = j["runs"] = nlohmann::json::array();
  for ( auto const& r : report.runs )
  {
    nlohmann::json e{ { "seed", r.seed }, { "status", r.success ? "success" : "failure" } };
    if ( r.success )
    {
      e["tmv"] = r.tmv;
      e["tinv"] = r.tinv;
      e["tg"] = r.tg;
      e["weighted_gates"] = r.weighted_gates;
      e["max_level"] = r.max_level;
    }
    runs.push_back( std::move( e ) );
  }

  if ( report.wall_time_seconds )
    j["wall_time_seconds"] = *report.wall_time_seconds;

  if ( report.failure )
  {
    j["failure"] = { { "output", report.failure->output }, { "message", report.failure->message } };
    return j;
  }

  j["verification"] = report.verification;
  auto& outs = j["outputs"] = nlohmann::json::array();
  for ( auto const& o : report.outputs )
  {
    outs.push_back( { { "name", o.name },
                      { "expression", o.expression },
                      { "nmv", o.nmv },
                      { "ninv", o.ninv },
                      { "levels", o.levels } } );
  }
  auto const& g = *report.global;
  j["global"] = { { "cmv", g.cmv },
                  { "cinv", g.cinv },
                  { "tmv", g.tmv },
                  { "tinv", g.tinv },
                  { "tg", g.tg },
                  { "weighted_gates", g.weighted_gates },
                  { "max_level", g.max_level } };
  return j;
}

std::string format_number( double value )
{
  char buf[32];
  std::snprintf( buf, sizeof buf, "%.2f", value );
  return buf;
}

std::string format_table( const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows )
{
  std::vector<std::size_t> width( header.size() );
  for ( std::size_t c = 0; c < header.size(); ++c )
  {
    width[c] = header[c].size();
    for ( auto const& row : rows )
      if ( c < row.size() )
        width[c] = std::max( width[c], row[c].size() );
  }
  std::string out;
  auto const line = [&]( const std::vector<std::string>& cells ) {
    for ( std::size_t c = 0; c < header.size(); ++c )
    {
      auto const cell = c < cells.size() ? cells[c] : std::string{};
      /* the first two columns are text; the rest are numbers */
      auto const pad = std::string( width[c] - cell.size(), ' ' );
      out += c < 2u ? cell + pad : pad + cell;
      out += c + 1u < header.size() ? "  " : "";
    }
    while ( !out.empty() && out.back() == ' ' )
      out.pop_back();
    out += '\n';
  };
  line( header );
  for ( auto const& row : rows )
    line( row );
  return out;
}

std::string emit_report( const run_report& report, report_format format )
{
  if ( format == report_format::json )
    return to_json( report ).dump( 2 ) + "\n";

  if ( report.failure )
  {
    return "synthesis failed for output '" + report.failure->output + "': " + report.failure->message + " (seed " +
           std::to_string( report.seed ) + ")\n";
  }
  std::vector<std::vector<std::string>> rows;
  auto const& g = *report.global;
  for ( std::size_t i = 0; i < report.outputs.size(); ++i )
  {
    auto const& o = report.outputs[i];
    std::vector<std::string> row{ o.name, o.expression, std::to_string( o.nmv ), std::to_string( o.ninv ),
                                  std::to_string( o.levels ) };
    if ( i == 0u )
    {
      for ( auto v : { g.cmv, g.cinv, g.tmv, g.tinv, g.tg, g.max_level } )
        row.push_back( std::to_string( v ) );
    }
    rows.push_back( std::move( row ) );
  }
  auto text = format_table( { "Output", "Expression", "NMV", "NINV", "Levels", "CMV", "CINV", "TMV", "TINV", "TG", "Max-level" },
                            rows );
  text += "seed " + std::to_string( report.seed ) + ", weighted gates " + format_number( g.weighted_gates ) +
          ", verification " + report.verification + "\n";
  return text;
}

std::vector<std::pair<std::string, std::string>> report_expressions( const nlohmann::json& report )
{
  if ( !report.contains( "outputs" ) || !report["outputs"].is_array() )
    throw usage_error( "report has no outputs (failed run?)" );
  std::vector<std::pair<std::string, std::string>> exprs;
  for ( auto const& o : report["outputs"] )
    exprs.emplace_back( o.at( "name" ).get<std::string>(), o.at( "expression" ).get<std::string>() );
  return exprs;
}

} // namespace majsynth
