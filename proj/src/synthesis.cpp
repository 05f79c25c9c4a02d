#include <majsynth/errors.hpp>
#include <majsynth/synthesis.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <tuple>

namespace majsynth
{

namespace
{

/* three times the weighted gate count, exact in integers */
auto rank_key( const solution_set& s )
{
  auto const& m = s.metrics;
  return std::tuple{ s.success() ? 0 : 1, m.max_level, 3u * m.total_maj + m.total_inv, m.tg, s.seed };
}

} // namespace

bool ranks_before( const solution_set& a, const solution_set& b )
{
  return rank_key( a ) < rank_key( b );
}

multi_run_result run_best_of( const circuit_spec& spec, const ga_config& cfg, uint32_t runs )
{
  if ( runs < 1u )
    throw config_error( "run count must be at least 1" );
  spec.validate();
  validate( cfg );

  std::vector<solution_set> results( runs );
  auto const run_one = [&]( uint32_t i, uint32_t threads ) {
    auto c = cfg;
    c.seed = cfg.seed + i;
    c.threads = threads;
    results[i] = run_multi_output( spec, c );
  };

  if ( runs == 1u || cfg.threads <= 1u )
  {
    for ( uint32_t i = 0; i < runs; ++i )
      run_one( i, runs == 1u ? cfg.threads : 1u );
  }
  else
  {
    std::atomic<uint32_t> next{ 0 };
    std::vector<std::exception_ptr> errors( std::min( cfg.threads, runs ) );
    {
      std::vector<std::jthread> pool;
      for ( std::size_t w = 0; w < errors.size(); ++w )
      {
        pool.emplace_back( [&, w]() {
          try
          {
            for ( auto i = next++; i < runs; i = next++ )
              run_one( i, 1u );
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

  multi_run_result out;
  std::size_t best = 0;
  for ( std::size_t i = 0; i < results.size(); ++i )
  {
    auto const& r = results[i];
    auto const& m = r.metrics;
    out.runs.push_back( { r.seed, r.success(), m.total_maj, m.total_inv, m.tg, m.weighted_gates, m.max_level } );
    if ( ranks_before( r, results[best] ) )
      best = i;
  }
  out.best = std::move( results[best] );
  return out;
}

} // namespace majsynth
