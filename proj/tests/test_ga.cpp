#include <majsynth/errors.hpp>
#include <majsynth/fitness.hpp>
#include <majsynth/ga.hpp>
#include <majsynth/rewrite.hpp>

#include "support/reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace majsynth;

namespace
{

std::set<std::vector<uint8_t>> distinct( std::span<const chromosome> cs )
{
  std::set<std::vector<uint8_t>> s;
  for ( auto const& c : cs )
    s.insert( encode( c ) );
  return s;
}

std::vector<individual> population_with( std::initializer_list<double> fitnesses )
{
  std::vector<individual> p;
  uint32_t v = 0;
  for ( auto f : fitnesses )
    p.push_back( { chromosome::leaf( gene::var( v++ % 3u ) ), f } );
  return p;
}

} // namespace

TEST_CASE( "configuration counts and validation" )
{
  ga_config cfg;
  CHECK( elite_count( cfg ) == 20u );
  CHECK( crossover_count( cfg, false ) == 126u );
  CHECK( crossover_count( cfg, true ) == 144u );
  CHECK_NOTHROW( validate( cfg ) );

  auto bad = cfg;
  bad.elite_frac = 1.0;
  CHECK_THROWS_AS( validate( bad ), config_error );
  bad = cfg;
  bad.elite_frac = 0.0;
  CHECK_THROWS_AS( validate( bad ), config_error );
  bad = cfg;
  bad.tournament_size = 0;
  CHECK_THROWS_AS( validate( bad ), config_error );
  bad = cfg;
  bad.crossover_rate_initial = 1.5;
  CHECK_THROWS_AS( validate( bad ), config_error );
}

TEST_CASE( "initial population is distinct and reproducible" )
{
  ga_config cfg;
  auto r1 = make_stream( 1, stream_purpose::init );
  auto r2 = make_stream( 1, stream_purpose::init );
  auto const a = init_population( 3, cfg, r1 );
  auto const b = init_population( 3, cfg, r2 );
  CHECK( a.size() == 200u );
  CHECK( distinct( a ).size() == 200u );
  CHECK( a == b );
  for ( auto const& c : a )
    CHECK( c.size() <= cfg.max_len );
}

TEST_CASE( "init fills up when distinct supply is short" )
{
  /* one variable and two genes: only 0, 1, A, 0', 1', A' exist */
  ga_config cfg;
  cfg.pop = 6;
  cfg.max_len = 2;
  auto rng = make_stream( 2, stream_purpose::init );
  auto const p = init_population( 1, cfg, rng );
  CHECK( p.size() == 6u );
}

TEST_CASE( "mutation children" )
{
  ga_config cfg;
  auto r1 = make_stream( 4, stream_purpose::mutation );
  auto r2 = make_stream( 4, stream_purpose::mutation );
  CHECK( mutation_children( 34, 4, cfg, r1 ).size() == 34u );
  CHECK( mutation_children( 0, 4, cfg, r1 ).empty() );
  auto r3 = make_stream( 4, stream_purpose::mutation );
  CHECK( mutation_children( 10, 4, cfg, r2 ) == mutation_children( 10, 4, cfg, r3 ) );
}

TEST_CASE( "tournament selection" )
{
  auto rng = make_stream( 5, stream_purpose::selection );
  auto const pop = population_with( { 0.5, 0.2, 0.9 } );
  /* a tournament as large as this population almost surely sees the 0.2 member */
  for ( int i = 0; i < 50; ++i )
  {
    auto const k = tournament_select( pop, 64, rng );
    CHECK( k == 1u );
  }
  auto const flat = population_with( { 0.3, 0.3, 0.3, 0.3 } );
  std::set<std::size_t> picked;
  for ( int i = 0; i < 200; ++i )
    picked.insert( tournament_select( flat, 3, rng ) );
  CHECK( picked.size() > 1u );
  auto const single = population_with( { 0.7 } );
  CHECK( tournament_select( single, 3, rng ) == 0u );
}

TEST_CASE( "tournament ties go to the earliest draw" )
{
  /* with equal fitness the result equals the first index drawn from an identical stream */
  auto const flat = population_with( { 0.3, 0.3, 0.3, 0.3, 0.3 } );
  for ( uint64_t s = 0; s < 20; ++s )
  {
    auto a = make_stream( s, stream_purpose::selection );
    auto b = make_stream( s, stream_purpose::selection );
    auto const first = uniform_index( b, flat.size() );
    CHECK( tournament_select( flat, 3, a ) == first );
  }
}

TEST_CASE( "subtree exchange keeps trees valid and bounded" )
{
  auto rng = make_stream( 6, stream_purpose::crossover );
  base_tables const base( 3 );
  for ( int i = 0; i < 2000; ++i )
  {
    auto const p1 = random_chromosome( 3, 40, rng );
    auto const p2 = random_chromosome( 3, 40, rng );
    auto const pair = exchange_subtrees( p1, p2, 40, rng );
    if ( !pair )
      continue;
    REQUIRE( pair->first.size() <= 40u );
    REQUIRE( pair->second.size() <= 40u );
    /* decode validates arity */
    REQUIRE_NOTHROW( decode( encode( pair->first ) ) );
    REQUIRE_NOTHROW( decode( encode( pair->second ) ) );
    REQUIRE( pair->first.size() + pair->second.size() == p1.size() + p2.size() );
  }
}

TEST_CASE( "crossover falls back to the fitter parent when nothing fits" )
{
  ga_config cfg;
  cfg.max_len = 7;
  auto rng = make_stream( 7, stream_purpose::crossover );
  /* any exchange other than root-for-root or leaf-for-leaf puts 8+ genes into one child */
  individual p1{ parse_expression( "M(A,B,M(A,B,C))" ), 0.5 };
  individual p2{ parse_expression( "M(B,A,M(C,A,B))" ), 0.1 };
  auto const fitness = [&]( const chromosome& c ) { return c == p2.genes ? 0.1 : 0.5; };
  for ( int i = 0; i < 50; ++i )
  {
    auto const child = crossover( p1, p2, fitness, 3, cfg, rng );
    CHECK( child.genes.size() <= 7u );
  }
  cfg.max_len = 1;
  individual big1{ parse_expression( "M(A,B,C)" ), 0.9 };
  individual big2{ parse_expression( "M(A,C,B)" ), 0.4 };
  auto const c = crossover( big1, big2, fitness, 3, cfg, rng );
  CHECK( c.genes == big2.genes );
  CHECK( c.fitness == 0.4 );
}

TEST_CASE( "generation invariants over whole runs" )
{
  std::vector<std::vector<uint64_t>> targets{ { 0, 2, 4, 7 }, { 2, 4, 6 }, { 3, 5, 6, 7 }, { 1, 2 } };
  for ( std::size_t k = 0; k < targets.size(); ++k )
  {
    ga_config cfg;
    cfg.pop = 60;
    cfg.max_gen = 150;
    cfg.thresh_gen = 40;
    cfg.seed = 100 + k;
    auto const target = from_minterms( { "f", targets[k] }, 3 );
    auto const fitness = [&]( const chromosome& c ) { return fitness1( c, target ); };

    auto const e = elite_count( cfg );
    std::vector<individual> previous;
    double previous_best = 1e300;
    uint32_t last_gen = 0;
    auto const observer = [&]( uint32_t gen, std::span<const individual> pop ) {
      REQUIRE( gen == last_gen + 1u );
      last_gen = gen;
      REQUIRE( pop.size() == cfg.pop );
      REQUIRE( std::is_sorted( pop.begin(), pop.end(), []( auto& a, auto& b ) { return a.fitness < b.fitness; } ) );
      REQUIRE( pop.front().fitness <= previous_best );
      previous_best = pop.front().fitness;
      for ( auto const& ind : pop )
        REQUIRE( ind.genes.size() <= cfg.max_len );
      if ( !previous.empty() )
      {
        /* the e best of the previous generation reappear verbatim */
        for ( uint32_t i = 0; i < e; ++i )
        {
          auto const found = std::any_of( pop.begin(), pop.end(), [&]( const individual& ind ) {
            return ind.genes == previous[i].genes && ind.fitness == previous[i].fitness;
          } );
          REQUIRE( found );
        }
      }
      previous.assign( pop.begin(), pop.end() );
    };
    auto const r = evolve( 3, fitness, cfg, 0, observer );
    CHECK( r.generations == last_gen );
    CHECK( r.best_history.size() == r.generations );
    CHECK( std::is_sorted( r.best_history.rbegin(), r.best_history.rend() ) );
    if ( r.found_valid )
      CHECK( evaluate( r.best.genes, 3 ) == target );
  }
}

TEST_CASE( "stagnation ends a run early once valid" )
{
  ga_config cfg;
  cfg.pop = 40;
  cfg.thresh_gen = 25;
  cfg.max_gen = 2000;
  auto const target = const1( 3 );
  auto const r = run_single_output( target, cfg );
  REQUIRE( r.evolution.found_valid );
  CHECK( r.evolution.generations < cfg.max_gen );
  CHECK( compute_metrics( r.evolution.best.genes ).n_maj == 0u );
  CHECK( r.evolution.best.fitness == degenerate_valid_fitness );
}

TEST_CASE( "single output of table3 F1" )
{
  /* two MAJ gates at level 2 in at least one of ten seeds */
  auto const target = from_minterms( { "F1", { 2, 4, 6 } }, 3 );
  bool reached = false;
  for ( uint64_t seed = 1; seed <= 10 && !reached; ++seed )
  {
    ga_config cfg;
    cfg.seed = seed;
    auto const r = run_single_output( target, cfg );
    if ( !r.evolution.found_valid )
      continue;
    CHECK( evaluate( r.evolution.best.genes, 3 ) == target );
    auto const m = compute_metrics( r.evolution.best.genes );
    reached = m.n_maj <= 2u && m.levels <= 2u;
    for ( auto const& row : r.generation_bests )
      CHECK( evaluate( row.chromosomes.front(), 3 ) == target );
  }
  CHECK( reached );
}

TEST_CASE( "row archive deduplicates and evicts the worst" )
{
  base_tables const b3( 3 );
  row_archive archive( 2 );
  auto const row = [&]( const char* e, double f ) { return make_stored_row( { parse_expression( e ) }, b3, f ); };
  CHECK( archive.add( row( "M(A,B,0)", 0.5 ) ) );
  CHECK_FALSE( archive.add( row( "M(A,B,0)", 0.5 ) ) );
  CHECK( archive.add( row( "M(A,B,1)", 0.7 ) ) );
  CHECK( archive.add( row( "M(A,C,1)", 0.2 ) ) );
  CHECK_FALSE( archive.add( row( "M(B,C,1)", 0.9 ) ) );
  REQUIRE( archive.rows().size() == 2u );
  for ( auto const& r : archive.rows() )
    CHECK( r.fitness <= 0.5 );
}

TEST_CASE( "multi-output runs verify and are reproducible" )
{
  circuit_spec spec{ 3, { { "F1", { 0, 2, 4, 7 } }, { "F2", { 0, 2, 3, 4 } } } };
  ga_config cfg;
  cfg.pop = 100;
  cfg.max_gen = 1500;
  cfg.thresh_gen = 100;
  cfg.seed = 1;
  auto const a = run_multi_output( spec, cfg );
  auto const b = run_multi_output( spec, cfg );
  cfg.threads = 3;
  auto const c = run_multi_output( spec, cfg );
  REQUIRE( a.success() );
  CHECK( a.chromosomes == b.chromosomes );
  CHECK( a.chromosomes == c.chromosomes );
  CHECK( a.metrics == c.metrics );
  CHECK( a.generations == c.generations );
  for ( std::size_t i = 0; i < spec.outputs.size(); ++i )
    CHECK( reference::minterms( a.chromosomes[i], 3 ) == spec.outputs[i].minterms );
  CHECK( a.metrics.tg == a.metrics.total_maj + a.metrics.total_inv );
}

TEST_CASE( "identical outputs share every gate" )
{
  circuit_spec spec{ 3, { { "F1", { 2, 4, 6 } }, { "F2", { 2, 4, 6 } } } };
  ga_config cfg;
  cfg.pop = 80;
  cfg.max_gen = 800;
  cfg.thresh_gen = 80;
  auto const s = run_multi_output( spec, cfg );
  REQUIRE( s.success() );
  auto const& m = s.metrics;
  CHECK( m.common_maj == m.outputs[0].n_maj );
  CHECK( m.total_maj == m.outputs[0].n_maj );
}

TEST_CASE( "failure names the output" )
{
  /* three-input parity cannot fit in 4 genes */
  circuit_spec spec{ 3, { { "P", { 1, 2, 4, 7 } } } };
  ga_config cfg;
  cfg.pop = 20;
  cfg.max_gen = 30;
  cfg.max_len = 4;
  auto const s = run_multi_output( spec, cfg );
  REQUIRE_FALSE( s.success() );
  CHECK( s.failure->output == "P" );
}
