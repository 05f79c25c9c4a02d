#include <majsynth/errors.hpp>
#include <majsynth/ga.hpp>
#include <majsynth/rewrite.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace majsynth
{

namespace
{

template<typename Fn>
void parallel_for( std::size_t count, uint32_t threads, Fn&& fn )
{
  if ( threads <= 1u || count < 2u )
  {
    for ( std::size_t i = 0; i < count; ++i )
      fn( i );
    return;
  }
  auto const workers = std::min<std::size_t>( threads, count );
  std::vector<std::exception_ptr> errors( workers );
  {
    std::vector<std::jthread> pool;
    pool.reserve( workers );
    for ( std::size_t w = 0; w < workers; ++w )
    {
      pool.emplace_back( [&, w]() {
        try
        {
          for ( std::size_t i = w; i < count; i += workers )
            fn( i );
        }
        catch ( ... )
        {
          errors[w] = std::current_exception();
        }
      } );
    }
  }
  for ( auto const& e : errors )
    if ( e )
      std::rethrow_exception( e );
}

std::vector<double> evaluate_all( std::span<const chromosome> cs, const fitness_function& fitness, uint32_t threads )
{
  std::vector<double> values( cs.size() );
  parallel_for( cs.size(), threads, [&]( std::size_t i ) { values[i] = fitness( cs[i] ); } );
  return values;
}

/* fitter of two; the first wins ties */
std::size_t fitter( double a, double b )
{
  return b < a ? 1u : 0u;
}

} // namespace

void validate( const ga_config& cfg )
{
  if ( cfg.pop < 2u )
    throw config_error( "population size must be at least 2" );
  if ( !( cfg.elite_frac >= 0.0 && cfg.elite_frac <= 1.0 ) )
    throw config_error( "elite fraction must lie in [0, 1]" );
  auto const e = elite_count( cfg );
  if ( e == 0u || e >= cfg.pop )
    throw config_error( "elite count must satisfy 0 < e < pop, got e = " + std::to_string( e ) + " for pop = " + std::to_string( cfg.pop ) );
  for ( auto rate : { cfg.crossover_rate_initial, cfg.crossover_rate_after_valid } )
    if ( !( rate >= 0.0 && rate <= 1.0 ) )
      throw config_error( "crossover rates must lie in [0, 1]" );
  if ( cfg.tournament_size < 1u )
    throw config_error( "tournament size must be at least 1" );
  if ( cfg.max_gen < 1u )
    throw config_error( "generation cap must be at least 1" );
  if ( cfg.thresh_gen < 1u )
    throw config_error( "stagnation window must be at least 1" );
  if ( cfg.max_len < 1u )
    throw config_error( "maximum chromosome length must be at least 1" );
  if ( cfg.batch_factor < 1u )
    throw config_error( "batch factor must be at least 1" );
  if ( cfg.max_stored_rows < 1u )
    throw config_error( "stored row cap must be at least 1" );
  if ( cfg.threads < 1u )
    throw config_error( "thread count must be at least 1" );
}

uint32_t elite_count( const ga_config& cfg )
{
  return static_cast<uint32_t>( std::lround( cfg.elite_frac * cfg.pop ) );
}

uint32_t crossover_count( const ga_config& cfg, bool valid_found )
{
  auto const rate = valid_found ? cfg.crossover_rate_after_valid : cfg.crossover_rate_initial;
  auto const rest = cfg.pop - std::min( cfg.pop, elite_count( cfg ) );
  return std::min<uint32_t>( rest, static_cast<uint32_t>( std::lround( rate * rest ) ) );
}

std::vector<chromosome> sample_random_batch( std::size_t count, uint32_t num_vars, const ga_config& cfg, rng_engine& rng )
{
  if ( count == 0u )
    return {};

  std::vector<chromosome> distinct;
  std::unordered_set<chromosome> seen;
  auto const batch = count * cfg.batch_factor;
  distinct.reserve( batch );
  for ( std::size_t i = 0; i < batch; ++i )
  {
    auto c = random_chromosome( num_vars, cfg.max_len, rng );
    if ( seen.insert( c ).second )
      distinct.push_back( std::move( c ) );
  }

  std::vector<chromosome> result;
  result.reserve( count );
  if ( distinct.size() >= count )
  {
    /* partial Fisher-Yates */
    for ( std::size_t i = 0; i < count; ++i )
    {
      auto const j = i + uniform_index( rng, distinct.size() - i );
      std::swap( distinct[i], distinct[j] );
      result.push_back( std::move( distinct[i] ) );
    }
    return result;
  }

  result = std::move( distinct );
  std::size_t attempts = 0;
  while ( result.size() < count )
  {
    auto c = random_chromosome( num_vars, cfg.max_len, rng );
    /* tiny search spaces may not hold enough distinct trees */
    if ( seen.insert( c ).second || ++attempts > 100u * count )
      result.push_back( std::move( c ) );
  }
  return result;
}

std::vector<chromosome> init_population( uint32_t num_vars, const ga_config& cfg, rng_engine& rng )
{
  return sample_random_batch( cfg.pop, num_vars, cfg, rng );
}

std::vector<chromosome> mutation_children( std::size_t count, uint32_t num_vars, const ga_config& cfg, rng_engine& rng )
{
  return sample_random_batch( count, num_vars, cfg, rng );
}

std::size_t tournament_select( std::span<const individual> population, uint32_t size, rng_engine& rng )
{
  if ( population.empty() )
    throw usage_error( "tournament selection on an empty population" );
  auto best = uniform_index( rng, population.size() );
  for ( uint32_t k = 1; k < size; ++k )
  {
    auto const i = uniform_index( rng, population.size() );
    if ( population[i].fitness < population[best].fitness )
      best = i;
  }
  return best;
}

std::optional<offspring_pair> exchange_subtrees( const chromosome& p1, const chromosome& p2, uint32_t max_len, rng_engine& rng )
{
  for ( int attempt = 0; attempt < 10; ++attempt )
  {
    auto const i = uniform_index( rng, p1.size() );
    auto const j = uniform_index( rng, p2.size() );
    auto const s1 = p1.subtree_end( i ) - i;
    auto const s2 = p2.subtree_end( j ) - j;
    if ( p1.size() - s1 + s2 <= max_len && p2.size() - s2 + s1 <= max_len )
    {
      return offspring_pair{ p1.replace_subtree( i, p2.subtree( j ) ), p2.replace_subtree( j, p1.subtree( i ) ) };
    }
  }
  return std::nullopt;
}

individual crossover( const individual& p1, const individual& p2, const fitness_function& fitness, uint32_t num_vars,
                      const ga_config& cfg, rng_engine& rng )
{
  auto pair = exchange_subtrees( p1.genes, p2.genes, cfg.max_len, rng );
  if ( !pair )
  {
    return fitter( p1.fitness, p2.fitness ) == 0u ? p1 : p2;
  }
  base_tables const base( num_vars );
  individual a{ local_improvement( pair->first, base ), 0.0 };
  individual b{ local_improvement( pair->second, base ), 0.0 };
  a.fitness = fitness( a.genes );
  b.fitness = fitness( b.genes );
  return fitter( a.fitness, b.fitness ) == 0u ? a : b;
}

evolution_result evolve( uint32_t num_vars, const fitness_function& fitness, const ga_config& cfg, uint64_t stream_index,
                         const generation_observer& observer )
{
  validate( cfg );
  base_tables const base( num_vars );
  auto init_rng = make_stream( cfg.seed, stream_purpose::init, stream_index );
  auto selection_rng = make_stream( cfg.seed, stream_purpose::selection, stream_index );
  auto crossover_rng = make_stream( cfg.seed, stream_purpose::crossover, stream_index );
  auto mutation_rng = make_stream( cfg.seed, stream_purpose::mutation, stream_index );

  std::vector<individual> population;
  {
    auto genes = init_population( num_vars, cfg, init_rng );
    auto values = evaluate_all( genes, fitness, cfg.threads );
    population.reserve( cfg.pop );
    for ( std::size_t i = 0; i < genes.size(); ++i )
      population.push_back( { std::move( genes[i] ), values[i] } );
  }

  auto const elites = elite_count( cfg );
  evolution_result result;
  auto previous_best = std::numeric_limits<double>::infinity();
  uint32_t stagnant = 0;

  for ( uint32_t generation = 1;; ++generation )
  {
    std::stable_sort( population.begin(), population.end(),
                      []( const individual& a, const individual& b ) { return a.fitness < b.fitness; } );
    if ( observer )
      observer( generation, population );

    auto const best = population.front().fitness;
    result.best_history.push_back( best );
    result.generations = generation;
    if ( best < previous_best )
    {
      previous_best = best;
      stagnant = 0;
    }
    else if ( is_valid_fitness( best ) )
    {
      ++stagnant;
    }
    result.found_valid = result.found_valid || is_valid_fitness( best );
    if ( ( result.found_valid && stagnant >= cfg.thresh_gen ) || generation >= cfg.max_gen )
      break;

    auto const children = crossover_count( cfg, result.found_valid );
    auto const mutants = cfg.pop - elites - children;

    std::vector<std::size_t> parents( 2u * children );
    for ( auto& p : parents )
      p = tournament_select( population, cfg.tournament_size, selection_rng );

    /* offspring are built sequentially and scored in one batch so threading cannot perturb the streams */
    std::vector<chromosome> pending;
    std::vector<std::optional<std::size_t>> first_offspring( children );
    pending.reserve( 2u * children + mutants );
    for ( uint32_t k = 0; k < children; ++k )
    {
      auto const& p1 = population[parents[2u * k]].genes;
      auto const& p2 = population[parents[2u * k + 1u]].genes;
      if ( auto pair = exchange_subtrees( p1, p2, cfg.max_len, crossover_rng ) )
      {
        first_offspring[k] = pending.size();
        pending.push_back( local_improvement( pair->first, base ) );
        pending.push_back( local_improvement( pair->second, base ) );
      }
    }
    auto const mutant_begin = pending.size();
    for ( auto& m : mutation_children( mutants, num_vars, cfg, mutation_rng ) )
      pending.push_back( std::move( m ) );

    auto const values = evaluate_all( pending, fitness, cfg.threads );

    std::vector<individual> next;
    next.reserve( cfg.pop );
    next.insert( next.end(), population.begin(), population.begin() + elites );
    for ( uint32_t k = 0; k < children; ++k )
    {
      if ( auto const f = first_offspring[k] )
      {
        auto const pick = *f + fitter( values[*f], values[*f + 1u] );
        next.push_back( { pending[pick], values[pick] } );
      }
      else
      {
        auto const& a = population[parents[2u * k]];
        auto const& b = population[parents[2u * k + 1u]];
        next.push_back( fitter( a.fitness, b.fitness ) == 0u ? a : b );
      }
    }
    for ( auto i = mutant_begin; i < pending.size(); ++i )
      next.push_back( { std::move( pending[i] ), values[i] } );
    population = std::move( next );
  }

  result.best = population.front();
  return result;
}

bool row_archive::add( stored_row row )
{
  for ( auto const& r : rows_ )
    if ( r.chromosomes == row.chromosomes )
      return false;
  if ( rows_.size() >= capacity_ )
  {
    auto worst = rows_.begin();
    for ( auto it = rows_.begin(); it != rows_.end(); ++it )
      if ( it->fitness >= worst->fitness )
        worst = it;
    if ( !( row.fitness < worst->fitness ) )
      return false;
    rows_.erase( worst );
  }
  rows_.push_back( std::move( row ) );
  return true;
}

single_output_result run_single_output( const truth_table& target, const ga_config& cfg, uint64_t stream_index,
                                        const generation_observer& observer )
{
  base_tables const base( target.num_vars() );
  row_archive archive( cfg.max_stored_rows );
  auto const fitness = [&]( const chromosome& c ) { return fitness1( c, target, base ); };
  auto const record = [&]( uint32_t generation, std::span<const individual> population ) {
    if ( is_valid_fitness( population.front().fitness ) )
      archive.add( make_stored_row( { population.front().genes }, base, population.front().fitness ) );
    if ( observer )
      observer( generation, population );
  };
  single_output_result r;
  r.evolution = evolve( target.num_vars(), fitness, cfg, stream_index, record );
  r.generation_bests = archive.release();
  return r;
}

solution_set run_multi_output( const circuit_spec& spec, const ga_config& cfg )
{
  spec.validate();
  validate( cfg );
  auto const start = std::chrono::steady_clock::now();
  auto const n = spec.num_vars;
  auto const num_outputs = spec.outputs.size();
  base_tables const base( n );

  std::vector<truth_table> targets;
  for ( auto const& o : spec.outputs )
    targets.push_back( from_minterms( o, n ) );

  solution_set sol;
  sol.num_vars = n;
  sol.seed = cfg.seed;
  sol.generations.assign( num_outputs, 0u );
  for ( auto const& o : spec.outputs )
    sol.names.push_back( o.name );
  sol.rank_order.resize( num_outputs );
  std::iota( sol.rank_order.begin(), sol.rank_order.end(), std::size_t{ 0 } );
  if ( cfg.order == output_order::seeded_random )
  {
    auto rng = make_stream( cfg.seed, stream_purpose::order );
    for ( auto i = num_outputs; i > 1u; --i )
      std::swap( sol.rank_order[i - 1u], sol.rank_order[uniform_index( rng, i )] );
  }

  auto const finish = [&]() {
    sol.elapsed_seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    return sol;
  };
  auto const fail = [&]( std::size_t output ) {
    sol.failure = synthesis_failure{ spec.outputs[output].name,
                                     "no valid chromosome within " + std::to_string( cfg.max_gen ) + " generations" };
    return finish();
  };

  auto first = run_single_output( targets[sol.rank_order[0]], cfg, 0u );
  sol.generations[sol.rank_order[0]] = first.evolution.generations;
  if ( !first.evolution.found_valid )
    return fail( sol.rank_order[0] );

  std::vector<chromosome> ranked;
  if ( num_outputs == 1u )
  {
    ranked.push_back( first.evolution.best.genes );
  }
  else
  {
    fitness_context ctx( n, std::move( first.generation_bests ) );
    for ( std::size_t r = 1; r < num_outputs; ++r )
    {
      auto const output = sol.rank_order[r];
      auto const& target = targets[output];
      row_archive archive( cfg.max_stored_rows );
      auto const fitness = [&]( const chromosome& c ) { return fitness2( c, target, ctx )->value; };
      auto const record = [&]( uint32_t, std::span<const individual> population ) {
        if ( !is_valid_fitness( population.front().fitness ) )
          return;
        auto const res = fitness2( population.front().genes, target, ctx );
        archive.add( make_stored_row( res->combined, base, res->value ) );
      };
      auto const ev = evolve( n, fitness, cfg, r, record );
      sol.generations[output] = ev.generations;
      if ( !ev.found_valid )
        return fail( output );
      if ( r + 1u == num_outputs )
        ranked = fitness2( ev.best.genes, target, ctx )->combined;
      else
        ctx.replace_rows( archive.release() );
    }
  }

  /* final redundancy removal across all outputs */
  for ( auto& c : ranked )
    c = local_improvement( c, base );
  for ( std::size_t k = 0; k < ranked.size() && ranked.size() > 1u; ++k )
  {
    std::vector<chromosome> others;
    for ( std::size_t j = 0; j < ranked.size(); ++j )
      if ( j != k )
        others.push_back( ranked[j] );
    auto merged = harmonize( ranked[k], others, base );
    ranked[k] = std::move( merged.current );
    for ( std::size_t j = 0, o = 0; j < ranked.size(); ++j )
      if ( j != k )
        ranked[j] = std::move( merged.stored[o++] );
  }

  sol.chromosomes.resize( num_outputs );
  for ( std::size_t r = 0; r < num_outputs; ++r )
    sol.chromosomes[sol.rank_order[r]] = std::move( ranked[r] );
  for ( std::size_t i = 0; i < num_outputs; ++i )
  {
    if ( evaluate( sol.chromosomes[i], base ) != targets[i] )
      throw std::logic_error( "synthesized circuit for '" + spec.outputs[i].name + "' does not match its specification" );
  }
  sol.metrics = compute_combined_metrics( sol.chromosomes, base );
  return finish();
}

} // namespace majsynth
