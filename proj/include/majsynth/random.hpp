/*!
  \file random.hpp
  \brief Seeded random streams with portable bounded draws

  Standard distributions are implementation-defined, so bounded draws are
  done by hand to keep reports byte-identical across standard libraries.
*/

#pragma once

#include <cstdint>
#include <random>

namespace majsynth
{

using rng_engine = std::mt19937_64;

/*! \brief Purpose tags for deterministic sub-streams of one run. */
enum class stream_purpose : uint64_t
{
  init = 1,
  selection = 2,
  crossover = 3,
  mutation = 4,
  order = 5
};

inline uint64_t splitmix64( uint64_t x ) noexcept
{
  x += 0x9e3779b97f4a7c15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
  return x ^ ( x >> 31 );
}

inline rng_engine make_stream( uint64_t seed, stream_purpose purpose, uint64_t index = 0 )
{
  auto const s = splitmix64( splitmix64( splitmix64( seed ) ^ static_cast<uint64_t>( purpose ) ) ^ index );
  return rng_engine( s );
}

/*! \brief Uniform integer in [0, bound); bound must be positive. */
inline uint64_t uniform_index( rng_engine& rng, uint64_t bound )
{
  /* rejection sampling on the top of the range */
  auto const limit = ~uint64_t{ 0 } - ( ~uint64_t{ 0 } % bound );
  uint64_t x;
  do
  {
    x = rng();
  } while ( x >= limit );
  return x % bound;
}

} // namespace majsynth
