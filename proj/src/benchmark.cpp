#include <majsynth/benchmark.hpp>
#include <majsynth/errors.hpp>

namespace majsynth
{

const std::vector<benchmark_problem>& benchmark_corpus()
{
  static const std::vector<benchmark_problem> corpus = {
      { "table1",
        "3 input / 2 output",
        { 3, { { "F1", { 0, 2, 4, 7 } }, { "F2", { 0, 2, 3, 4 } } } },
        { "proposed", 6, 4, 10, 2 },
        { "tehrani", 6, 4, 10, 2 } },
      { "table2",
        "4 input / 2 output",
        { 4, { { "F1", { 0, 2, 6, 12, 13, 14 } }, { "F2", { 1, 3, 4, 5, 7, 12, 13, 15 } } } },
        { "proposed", 7, 4, 11, 3 },
        { "rezaee", 8, 5, 13, 3 } },
      { "table3",
        "3 input / 3 output",
        { 3, { { "F1", { 2, 4, 6 } }, { "F2", { 0, 1, 3, 6 } }, { "F3", { 0, 3, 6 } } } },
        { "proposed", 7, 6, 13, 2 },
        { "rezaee", 8, 6, 14, 3 } },
      { "table4",
        "3 input / 4 output",
        { 3, { { "F1", { 1, 4, 5, 7 } }, { "F2", { 3, 4, 6 } }, { "F3", { 0, 2, 5, 6 } }, { "F4", { 4, 6, 7 } } } },
        { "proposed", 9, 6, 15, 3 },
        { "rezaee", 9, 6, 15, 3 } },
      { "table5",
        "4 input / 4 output",
        { 4,
          { { "F1", { 3, 4, 7, 15 } },
            { "F2", { 1, 3, 4, 9, 13, 15 } },
            { "F3", { 3, 6, 7, 11, 13, 14, 15 } },
            { "F4", { 2, 6, 10, 11, 14 } } } },
        { "proposed", 10, 4, 14, 3 },
        /* tehrani and rezaee both reach TG 17; tehrani has the lower level */
        { "tehrani", 12, 5, 17, 3 } },
  };
  return corpus;
}

ga_config benchmark_config()
{
  ga_config cfg;
  cfg.order = output_order::seeded_random;
  return cfg;
}

const benchmark_problem& find_benchmark( const std::string& id )
{
  for ( auto const& p : benchmark_corpus() )
    if ( p.id == id )
      return p;
  throw usage_error( "unknown benchmark '" + id + "' (expected table1 .. table5)" );
}

benchmark_row run_benchmark( const benchmark_problem& p, const ga_config& cfg, uint32_t runs, bool include_timing )
{
  auto const result = run_best_of( p.spec, cfg, runs );
  benchmark_row row;
  row.problem = &p;
  row.report = make_report( result, p.spec, cfg, runs, include_timing );
  if ( row.report.global )
  {
    auto const& g = *row.report.global;
    row.met_proposed = g.tg <= p.proposed.tg && g.max_level <= p.proposed.max_level;
    row.met_baseline = g.tg <= p.baseline.tg && g.max_level <= p.baseline.max_level;
  }
  return row;
}

namespace
{

nlohmann::json to_json( const reference_numbers& r )
{
  return { { "source", r.source }, { "tmv", r.tmv }, { "tinv", r.tinv }, { "tg", r.tg }, { "max_level", r.max_level } };
}

} // namespace

std::string emit_benchmark( const std::vector<benchmark_row>& rows, report_format format )
{
  if ( format == report_format::json )
  {
    nlohmann::json j;
    auto& problems = j["problems"] = nlohmann::json::array();
    for ( auto const& row : rows )
    {
      problems.push_back( { { "id", row.problem->id },
                            { "description", row.problem->description },
                            { "report", majsynth::to_json( row.report ) },
                            { "proposed", to_json( row.problem->proposed ) },
                            { "baseline", to_json( row.problem->baseline ) },
                            { "met_proposed", row.met_proposed },
                            { "met_baseline", row.met_baseline } } );
    }
    return j.dump( 2 ) + "\n";
  }

  std::vector<std::vector<std::string>> cells;
  for ( auto const& row : rows )
  {
    auto const& p = *row.problem;
    std::vector<std::string> c{ p.id, p.description };
    if ( row.report.global )
    {
      auto const& g = *row.report.global;
      for ( auto v : { g.tmv, g.tinv, g.tg, g.max_level } )
        c.push_back( std::to_string( v ) );
      c.push_back( std::to_string( row.report.seed ) );
    }
    else
    {
      c.insert( c.end(), { "-", "-", "-", "-", "failed" } );
    }
    auto const ref = []( const reference_numbers& r ) {
      return std::to_string( r.tmv ) + "/" + std::to_string( r.tinv ) + "/" + std::to_string( r.tg ) + "/" +
             std::to_string( r.max_level );
    };
    c.push_back( ref( p.proposed ) );
    c.push_back( ref( p.baseline ) + " " + p.baseline.source );
    c.push_back( row.met_proposed ? "yes" : "no" );
    c.push_back( row.met_baseline ? "yes" : "no" );
    cells.push_back( std::move( c ) );
  }
  return format_table( { "Problem", "Kind", "TMV", "TINV", "TG", "Max-level", "Seed", "Proposed", "Baseline", "Met-proposed",
                         "Met-baseline" },
                       cells );
}

} // namespace majsynth
