/* Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails. */

#include <majsynth/benchmark.hpp>
#include <majsynth/fitness.hpp>
#include <majsynth/ga.hpp>
#include <majsynth/oracle.hpp>
#include <majsynth/random.hpp>
#include <majsynth/rewrite.hpp>
#include <majsynth/synthesis.hpp>

#include "support/reference.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace majsynth;

namespace
{

using clock_type = std::chrono::steady_clock;

double seconds_since( clock_type::time_point start )
{
  return std::chrono::duration<double>( clock_type::now() - start ).count();
}

int failures = 0;
/* lines are printed in criterion order at the end; progress goes to stderr */
std::map<int, std::string> lines;

void report( int id, const std::string& name, bool pass, const std::string& detail )
{
  std::ostringstream ss;
  ss << ( pass ? "PASS" : "FAIL" ) << "  criterion " << id << " (" << name << "): " << detail;
  lines[id] = ss.str();
  std::cerr << "done: criterion " << id << std::endl;
  failures += pass ? 0 : 1;
}

/* every successful solution checked row by row with the reference evaluator */
uint64_t verification_errors = 0;
uint64_t verified_solutions = 0;

void check_solution( const solution_set& s, const circuit_spec& spec )
{
  if ( !s.success() )
    return;
  ++verified_solutions;
  for ( std::size_t i = 0; i < spec.outputs.size(); ++i )
    if ( reference::minterms( s.chromosomes[i], spec.num_vars ) != spec.outputs[i].minterms )
      ++verification_errors;
  if ( !verify_solution( s, spec ).pass )
    ++verification_errors;
}

struct table_runs
{
  std::vector<solution_set> runs;
  double slowest = 0.0;
  std::size_t best = 0;

  const combined_metrics& best_metrics() const { return runs[best].metrics; }
  bool best_ok() const { return runs[best].success(); }

  bool any( const std::function<bool( const combined_metrics& )>& pred ) const
  {
    for ( auto const& r : runs )
      if ( r.success() && pred( r.metrics ) )
        return true;
    return false;
  }

  std::string summary() const
  {
    std::ostringstream ss;
    if ( !best_ok() )
      return "no run succeeded";
    auto const& m = best_metrics();
    ss << "best seed " << runs[best].seed << " TMV " << m.total_maj << " TINV " << m.total_inv << " TG " << m.tg
       << " max level " << m.max_level << "; slowest run " << slowest << " s";
    return ss.str();
  }
};

/* seeds 1..10, each run timed on its own */
table_runs run_table( const std::string& id )
{
  auto const& p = find_benchmark( id );
  table_runs t;
  for ( uint64_t seed = 1; seed <= 10; ++seed )
  {
    auto cfg = benchmark_config();
    cfg.seed = seed;
    auto const start = clock_type::now();
    t.runs.push_back( run_multi_output( p.spec, cfg ) );
    t.slowest = std::max( t.slowest, seconds_since( start ) );
    check_solution( t.runs.back(), p.spec );
    if ( ranks_before( t.runs.back(), t.runs[t.best] ) )
      t.best = t.runs.size() - 1u;
  }
  return t;
}

circuit_spec random_spec( rng_engine& rng )
{
  circuit_spec spec;
  spec.num_vars = 2u + static_cast<uint32_t>( uniform_index( rng, 3 ) );
  auto const outputs = 1u + uniform_index( rng, 3 );
  for ( uint64_t o = 0; o < outputs; ++o )
  {
    output_spec out{ "F" + std::to_string( o + 1u ), {} };
    for ( uint64_t r = 0; r < ( uint64_t{ 1 } << spec.num_vars ); ++r )
      if ( uniform_index( rng, 2 ) )
        out.minterms.push_back( r );
    spec.outputs.push_back( std::move( out ) );
  }
  return spec;
}

void criterion_random_specs()
{
  auto const errors_before = verification_errors;
  auto const start = clock_type::now();
  auto rng = make_stream( 2024, stream_purpose::init, 99 );
  ga_config cfg;
  cfg.pop = 100;
  cfg.max_gen = 1000;
  cfg.thresh_gen = 60;
  uint64_t succeeded = 0;
  for ( int i = 0; i < 1000; ++i )
  {
    auto const spec = random_spec( rng );
    cfg.seed = 1u + static_cast<uint64_t>( i );
    auto const s = run_multi_output( spec, cfg );
    check_solution( s, spec );
    succeeded += s.success() ? 1u : 0u;
  }
  auto const elapsed = seconds_since( start );
  auto const errors = verification_errors - errors_before;
  std::ostringstream ss;
  ss << "1000 random specs in " << elapsed << " s, " << succeeded << " synthesized, " << errors
     << " verification errors; " << verified_solutions << " successful solutions verified overall incl. tables";
  report( 1, "correctness", errors == 0u && verification_errors == 0u && elapsed < 600.0, ss.str() );
}

void criterion_oracle()
{
  auto const start = clock_type::now();
  exact_synthesizer synth( 3, 7 );
  std::vector<uint32_t> min_maj( 256 );
  bool witnesses_ok = true;
  for ( uint32_t bits = 0; bits < 256u; ++bits )
  {
    truth_table t( 3 );
    for ( uint64_t r = 0; r < 8; ++r )
      t.set_bit( r, ( bits >> r ) & 1u );
    auto const e = synth.find( t );
    if ( !e )
    {
      witnesses_ok = false;
      continue;
    }
    min_maj[bits] = e->min_maj;
    std::vector<bool> expected;
    for ( uint64_t r = 0; r < 8; ++r )
      expected.push_back( ( bits >> r ) & 1u );
    witnesses_ok = witnesses_ok && reference::table( e->witness, 3 ) == expected &&
                   compute_metrics( e->witness ).n_maj == e->min_maj;
  }
  auto const closure_seconds = seconds_since( start );

  auto rng = make_stream( 77, stream_purpose::init, 5 );
  uint32_t below_oracle = 0, small = 0, small_matched = 0;
  for ( int i = 0; i < 50; ++i )
  {
    auto const bits = static_cast<uint32_t>( uniform_index( rng, 256 ) );
    truth_table t( 3 );
    for ( uint64_t r = 0; r < 8; ++r )
      t.set_bit( r, ( bits >> r ) & 1u );
    bool matched = false;
    for ( uint64_t seed = 1; seed <= 10; ++seed )
    {
      ga_config cfg;
      cfg.seed = seed;
      auto const r = run_single_output( t, cfg );
      if ( !r.evolution.found_valid )
        continue;
      auto const n_maj = compute_metrics( r.evolution.best.genes ).n_maj;
      below_oracle += n_maj < min_maj[bits] ? 1u : 0u;
      matched = matched || n_maj == min_maj[bits];
    }
    if ( min_maj[bits] <= 2u )
    {
      ++small;
      small_matched += matched ? 1u : 0u;
    }
  }
  std::ostringstream ss;
  ss << "closure over 256 functions " << closure_seconds << " s, witnesses " << ( witnesses_ok ? "verified" : "BROKEN" )
     << "; 50 specs x 10 runs: " << below_oracle << " results below the oracle, " << small_matched << "/" << small
     << " functions with min_maj <= 2 matched";
  report( 5, "oracle consistency", witnesses_ok && closure_seconds < 300.0 && below_oracle == 0u && small_matched == small,
          ss.str() );
}

void criterion_properties()
{
  std::vector<std::string> broken;
  auto const check = [&]( bool ok, const std::string& what ) {
    if ( !ok )
      broken.push_back( what );
  };

  uint64_t improvement_cases = 0, codec_cases = 0, eval_cases = 0, boundary_cases = 0;
  for ( uint32_t n : { 2u, 3u, 4u } )
  {
    base_tables const base( n );
    auto rng = make_stream( 500 + n, stream_purpose::crossover, n );
    bool improve_ok = true, codec_ok = true, eval_ok = true, boundary_ok = true;
    for ( int i = 0; i < 4000; ++i )
    {
      auto const c = reference::any_tree( n, rng, i );
      auto const table = evaluate( c, base );

      auto const d = local_improvement( c, base );
      auto const mc = compute_metrics( c ), md = compute_metrics( d );
      improve_ok = improve_ok && evaluate( d, base ) == table && md.n_maj <= mc.n_maj && md.n_inv <= mc.n_inv &&
                   d.size() <= c.size();
      ++improvement_cases;

      codec_ok = codec_ok && structurally_equal( decode( encode( c ) ), c ) &&
                 structurally_equal( parse_expression( to_expression( c ) ), c );
      ++codec_cases;

      auto const ref = reference::table( c, n );
      for ( uint64_t r = 0; r < ref.size(); ++r )
        eval_ok = eval_ok && table.get_bit( r ) == ref[r];
      ++eval_cases;

      auto target = table;
      if ( i % 2 )
      {
        auto const r = uniform_index( rng, target.num_rows() );
        target.set_bit( r, !target.get_bit( r ) );
      }
      boundary_ok = boundary_ok && ( fitness1( c, target, base ) < 1.0 ) == ( table == target );
      ++boundary_cases;
    }
    check( improve_ok, "local_improvement n=" + std::to_string( n ) );
    check( codec_ok, "codec n=" + std::to_string( n ) );
    check( eval_ok, "evaluate n=" + std::to_string( n ) );
    check( boundary_ok, "fitness1 boundary n=" + std::to_string( n ) );
  }

  /* elitism and generation size over single- and multi-output style runs */
  uint64_t generations = 0;
  bool monotone = true, sized = true;
  auto rng = make_stream( 9, stream_purpose::init, 9 );
  for ( int run = 0; run < 30; ++run )
  {
    auto const n = 2u + static_cast<uint32_t>( run % 3 );
    truth_table target( n );
    for ( uint64_t r = 0; r < target.num_rows(); ++r )
      target.set_bit( r, uniform_index( rng, 2 ) );
    ga_config cfg;
    cfg.pop = 50 + 10 * ( run % 4 );
    cfg.max_gen = 300;
    cfg.thresh_gen = 50;
    cfg.seed = run + 1u;
    double best = 1e300;
    auto const observer = [&]( uint32_t, std::span<const individual> pop ) {
      ++generations;
      sized = sized && pop.size() == cfg.pop;
      monotone = monotone && pop.front().fitness <= best;
      best = pop.front().fitness;
    };
    evolve( n, [&]( const chromosome& c ) { return fitness1( c, target ); }, cfg, 0, observer );
  }
  check( monotone, "elitism monotonicity" );
  check( sized, "generation size" );

  std::ostringstream ss;
  ss << improvement_cases << " local_improvement, " << codec_cases << " codec, " << eval_cases << " evaluate, "
     << boundary_cases << " fitness1 cases; " << generations << " generations observed";
  for ( auto const& b : broken )
    ss << "; broken: " << b;
  report( 6, "property suites", broken.empty(), ss.str() );
}

std::string slurp( const std::filesystem::path& p )
{
  std::ifstream in( p, std::ios::binary );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism( const std::string& cli )
{
  namespace fs = std::filesystem;
  auto const dir = fs::temp_directory_path() / "majsynth_acceptance";
  fs::create_directories( dir );
  auto const problem = dir / "table1.txt";
  std::ofstream( problem ) << "vars 3\nout F1 = 0,2,4,7\nout F2 = 0,2,3,4\n";
  auto const problem4 = dir / "table2.txt";
  std::ofstream( problem4 ) << "vars 4\nout F1 = 0,2,6,12,13,14\nout F2 = 1,3,4,5,7,12,13,15\nset order seeded-random\n";

  bool identical = true;
  std::size_t compared = 0;
  for ( auto const& [prob, extra] : { std::pair{ problem, std::string( "--seed 1 --runs 3" ) },
                                      std::pair{ problem4, std::string( "--seed 4 --runs 2" ) } } )
  {
    std::vector<std::string> outputs;
    for ( auto const* threads : { "1", "1", "4" } )
    {
      auto const out = dir / ( "r" + std::to_string( outputs.size() ) + ".json" );
      auto const cmd = cli + " synthesize " + prob.string() + " " + extra + " --threads " + threads + " -o " + out.string();
      identical = identical && std::system( cmd.c_str() ) == 0;
      outputs.push_back( slurp( out ) );
    }
    identical = identical && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    compared += outputs.size();
  }

  /* library level, sequential against parallel fitness evaluation within a single run */
  auto const& p = find_benchmark( "table3" );
  auto cfg = benchmark_config();
  cfg.seed = 3;
  auto const seq = emit_report( make_report( run_best_of( p.spec, cfg, 1 ), p.spec, cfg, 1 ), report_format::json );
  cfg.threads = 4;
  auto const par = emit_report( make_report( run_best_of( p.spec, cfg, 1 ), p.spec, cfg, 1 ), report_format::json );
  identical = identical && seq == par;
  fs::remove_all( dir );

  report( 7, "determinism", identical,
          std::to_string( compared ) + " CLI reports (two invocations, 1 vs 4 threads) plus one in-process "
                                       "sequential/parallel pair " +
              ( identical ? "byte-identical" : "DIFFER" ) );
}

} // namespace

int main( int argc, char** argv )
{
  std::string const cli = argc > 1 ? argv[1] : "majsynth";
  auto const start = clock_type::now();

  {
    auto const t = run_table( "table1" );
    auto const& m = t.best_metrics();
    report( 2, "table1 reproduction",
            t.best_ok() && m.total_maj <= 6u && m.total_inv <= 4u && m.tg <= 10u && m.max_level <= 2u && t.slowest <= 60.0,
            t.summary() );
  }
  {
    auto const t = run_table( "table2" );
    auto const& m = t.best_metrics();
    auto const stretch = t.any( []( const combined_metrics& c ) { return c.tg <= 11u && c.total_maj <= 7u && c.total_inv <= 4u; } );
    report( 3, "table2 reproduction",
            t.best_ok() && m.tg <= 13u && m.max_level <= 3u && stretch && t.slowest <= 120.0,
            t.summary() + "; stretch TG<=11 TMV<=7 TINV<=4 " + ( stretch ? "met" : "NOT met" ) );
  }
  {
    auto const t3 = run_table( "table3" );
    auto const t5 = run_table( "table5" );
    auto const& m3 = t3.best_metrics();
    auto const& m5 = t5.best_metrics();
    auto const stretch3 = t3.any( []( const combined_metrics& c ) { return c.tg <= 13u && c.max_level <= 2u; } );
    auto const stretch5 = t5.any( []( const combined_metrics& c ) { return c.tg <= 14u; } );
    auto const base3 = t3.best_ok() && m3.tg <= 14u && m3.max_level <= 3u;
    auto const base5 = t5.best_ok() && m5.tg <= 17u && m5.max_level <= 3u;
    report( 4, "table3 and table5 reproduction",
            base3 && base5 && stretch3 && stretch5 && t3.slowest <= 180.0 && t5.slowest <= 180.0,
            "table3 " + t3.summary() + ", stretch " + ( stretch3 ? "met" : "NOT met" ) + "; table5 " + t5.summary() +
                ", stretch " + ( stretch5 ? "met" : "NOT met" ) );
  }
  criterion_random_specs();
  criterion_oracle();
  criterion_properties();
  criterion_determinism( cli );

  for ( auto const& [id, line] : lines )
    std::cout << line << "\n";
  std::cout << ( failures == 0 ? "all criteria passed" : std::to_string( failures ) + " criteria failed" ) << " in "
            << seconds_since( start ) << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
