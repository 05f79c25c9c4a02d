#include <majsynth/benchmark.hpp>
#include <majsynth/errors.hpp>
#include <majsynth/oracle.hpp>
#include <majsynth/problem.hpp>
#include <majsynth/report.hpp>
#include <majsynth/synthesis.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace majsynth;

namespace
{

/* options shared by synthesize and benchmark; unset ones keep file or default values */
struct ga_flags
{
  std::optional<uint32_t> pop, max_gen, tournament, stagnation, max_len, threads;
  std::optional<double> elite, xover, xover_valid;
  std::optional<uint64_t> seed;
  std::optional<std::string> order;
  uint32_t runs = 1;
  std::string format = "json";
  bool timing = false;
  std::string out;

  void add_to( CLI::App& app, uint32_t default_runs )
  {
    runs = default_runs;
    app.add_option( "--pop", pop, "population size (default 200)" );
    app.add_option( "--elite", elite, "elite fraction (default 0.10)" );
    app.add_option( "--max-gen", max_gen, "generation cap per output (default 5000)" );
    app.add_option( "--xover", xover, "crossover rate before a valid chromosome exists (default 0.70)" );
    app.add_option( "--xover-valid", xover_valid, "crossover rate afterwards (default 0.80)" );
    app.add_option( "--tournament", tournament, "tournament size (default 3)" );
    app.add_option( "--stagnation", stagnation, "generations without improvement before stopping (default 300)" );
    app.add_option( "--max-len", max_len, "maximum chromosome length in genes (default 40)" );
    app.add_option( "--seed", seed, "first seed; else the problem file, MAJSYNTH_SEED, or 1" );
    app.add_option( "--order", order, "output order: as-given or seeded-random (benchmark default)" );
    app.add_option( "--threads", threads, "worker threads; results do not depend on it" );
    app.add_option( "--runs", runs, "seeded runs per problem; the best is reported" )->capture_default_str();
    app.add_option( "--format", format, "json or table" )->capture_default_str();
    app.add_flag( "--timing", timing, "include wall time in the report" );
    app.add_option( "-o,--out", out, "write the report to a file instead of stdout" );
  }

  ga_config resolve( const std::vector<setting>& file_settings, ga_config cfg = {} ) const
  {
    if ( auto const* env = std::getenv( "MAJSYNTH_SEED" ); env && *env )
      apply_setting( cfg, "seed", env );
    apply_settings( cfg, file_settings );
    if ( pop ) cfg.pop = *pop;
    if ( elite ) cfg.elite_frac = *elite;
    if ( max_gen ) cfg.max_gen = *max_gen;
    if ( xover ) cfg.crossover_rate_initial = *xover;
    if ( xover_valid ) cfg.crossover_rate_after_valid = *xover_valid;
    if ( tournament ) cfg.tournament_size = *tournament;
    if ( stagnation ) cfg.thresh_gen = *stagnation;
    if ( max_len ) cfg.max_len = *max_len;
    if ( seed ) cfg.seed = *seed;
    if ( order ) cfg.order = parse_output_order( *order );
    if ( threads ) cfg.threads = *threads;
    validate( cfg );
    if ( runs < 1u )
      throw config_error( "run count must be at least 1" );
    return cfg;
  }
};

void write_output( const std::string& path, const std::string& text )
{
  if ( path.empty() )
  {
    std::cout << text;
    return;
  }
  std::ofstream os( path, std::ios::binary );
  if ( !os )
    throw std::runtime_error( "cannot write '" + path + "'" );
  os << text;
}

std::vector<uint64_t> parse_minterm_list( const std::string& text )
{
  auto const p = parse_problem( "vars 10\nout f = " + text + "\n" );
  return p.spec.outputs.front().minterms;
}

int cmd_synthesize( const std::string& path, const ga_flags& flags )
{
  auto const format = parse_report_format( flags.format );
  auto const prob = load_problem( path );
  auto const cfg = flags.resolve( prob.settings );
  auto const result = run_best_of( prob.spec, cfg, flags.runs );
  auto const report = make_report( result, prob.spec, cfg, flags.runs, flags.timing );
  write_output( flags.out, emit_report( report, format ) );
  if ( !report.success() )
  {
    std::cerr << "error: synthesis failed for output '" << report.failure->output << "': " << report.failure->message << "\n";
    return 1;
  }
  return 0;
}

int cmd_benchmark( const std::vector<std::string>& only, const ga_flags& flags )
{
  auto const format = parse_report_format( flags.format );
  std::vector<const benchmark_problem*> selected;
  if ( only.empty() )
  {
    for ( auto const& p : benchmark_corpus() )
      selected.push_back( &p );
  }
  else
  {
    for ( auto const& id : only )
      selected.push_back( &find_benchmark( id ) );
  }
  auto const cfg = flags.resolve( {}, benchmark_config() );
  std::vector<benchmark_row> rows;
  bool all_ok = true;
  for ( auto const* p : selected )
  {
    rows.push_back( run_benchmark( *p, cfg, flags.runs, flags.timing ) );
    all_ok = all_ok && rows.back().report.success();
  }
  write_output( flags.out, emit_benchmark( rows, format ) );
  return all_ok ? 0 : 1;
}

int cmd_verify( const std::string& report_path, const std::string& problem_path )
{
  std::ifstream in( report_path, std::ios::binary );
  if ( !in )
    throw std::runtime_error( "cannot open '" + report_path + "'" );
  auto const report = nlohmann::json::parse( in );
  auto const prob = load_problem( problem_path );
  auto const exprs = report_expressions( report );
  std::vector<chromosome> outputs;
  for ( std::size_t i = 0; i < exprs.size(); ++i )
  {
    if ( i < prob.spec.outputs.size() && exprs[i].first != prob.spec.outputs[i].name )
      throw usage_error( "report output '" + exprs[i].first + "' does not match problem output '" +
                         prob.spec.outputs[i].name + "'" );
    outputs.push_back( parse_expression( exprs[i].second ) );
  }
  auto const v = verify_chromosomes( outputs, prob.spec );
  for ( auto const& d : v.diffs )
  {
    std::cout << d.name << ": FAIL";
    for ( auto r : d.missing )
      std::cout << " missing " << r;
    for ( auto r : d.extra )
      std::cout << " extra " << r;
    std::cout << "\n";
  }
  std::cout << ( v.pass ? "pass\n" : "fail\n" );
  return v.pass ? 0 : 1;
}

int cmd_exact( uint32_t vars, const std::optional<std::string>& minterms, bool all, uint32_t max_gates, bool four_vars,
               const std::string& cache, const std::string& out )
{
  exact_synthesizer synth( vars, max_gates, four_vars );
  std::vector<truth_table> targets;
  if ( all )
  {
    if ( vars > 3u )
      throw usage_error( "--all is limited to at most 3 variables" );
    for ( uint64_t t = 0; t < ( uint64_t{ 1 } << ( 1u << vars ) ); ++t )
    {
      truth_table tt( vars );
      for ( uint64_t r = 0; r < tt.num_rows(); ++r )
        tt.set_bit( r, ( t >> r ) & 1u );
      targets.push_back( tt );
    }
  }
  else if ( minterms )
  {
    targets.push_back( from_minterms( { "f", parse_minterm_list( *minterms ) }, vars ) );
  }
  else
  {
    throw usage_error( "exact needs --minterms or --all" );
  }

  std::vector<exact_result> found;
  std::ostringstream text;
  bool missing = false;
  for ( auto const& t : targets )
  {
    auto const r = synth.find( t );
    if ( !r )
    {
      text << t.to_hex() << " not found within " << max_gates << " gates\n";
      missing = true;
      continue;
    }
    text << t.to_hex() << " min_maj " << r->min_maj << " level " << r->min_level_at_min_maj << " "
         << to_expression( r->witness ) << "\n";
    found.push_back( *r );
  }
  write_output( out, text.str() );
  if ( !cache.empty() )
  {
    std::ofstream os( cache, std::ios::binary );
    if ( !os )
      throw std::runtime_error( "cannot write '" + cache + "'" );
    write_exact_cache( os, found );
  }
  return missing ? 1 : 0;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "majsynth: majority/inverter logic synthesis with an elitist genetic algorithm" };
  app.require_subcommand( 1 );

  auto* synth = app.add_subcommand( "synthesize", "synthesize a problem file" );
  std::string problem_path;
  synth->add_option( "problem", problem_path, "problem file" )->required();
  ga_flags synth_flags;
  synth_flags.add_to( *synth, 1 );

  auto* bench = app.add_subcommand( "benchmark", "run the embedded five-problem corpus" );
  std::vector<std::string> only;
  bench->add_option( "--only", only, "problem ids (table1 .. table5)" );
  ga_flags bench_flags;
  bench_flags.add_to( *bench, 10 );

  auto* verify = app.add_subcommand( "verify", "check a JSON report against a problem file" );
  std::string report_path, verify_problem;
  verify->add_option( "report", report_path, "JSON report" )->required();
  verify->add_option( "problem", verify_problem, "problem file" )->required();

  auto* exact = app.add_subcommand( "exact", "exact minimum MAJ count for small functions" );
  uint32_t vars = 3, max_gates = 7;
  std::optional<std::string> minterms;
  bool all = false, four_vars = false;
  std::string cache, exact_out;
  exact->add_option( "--vars", vars, "number of variables" )->capture_default_str();
  exact->add_option( "--minterms", minterms, "comma-separated minterm list" );
  exact->add_flag( "--all", all, "every function of --vars variables" );
  exact->add_option( "--max-gates", max_gates, "gate bound" )->capture_default_str();
  exact->add_flag( "--allow-four-vars", four_vars, "permit 4 variables (gate bound at most 4)" );
  exact->add_option( "--cache", cache, "also write results as a cache file" );
  exact->add_option( "-o,--out", exact_out, "write results to a file instead of stdout" );

  CLI11_PARSE( app, argc, argv );

  try
  {
    if ( *synth )
      return cmd_synthesize( problem_path, synth_flags );
    if ( *bench )
      return cmd_benchmark( only, bench_flags );
    if ( *verify )
      return cmd_verify( report_path, verify_problem );
    return cmd_exact( vars, minterms, all, max_gates, four_vars, cache, exact_out );
  }
  catch ( const std::exception& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
