/*!
  \file problem.hpp
  \brief Line-oriented problem files

      # full adder carry
      vars 3
      out carry = 3,5,6,7
      set pop 100

  `set <key> <value>` lines override GA parameters for runs of this file.
  Keys are the long command-line flag names without dashes: pop, elite,
  max-gen, xover, xover-valid, tournament, stagnation, max-len, seed, order.
*/

#pragma once

#include <majsynth/boolfn.hpp>
#include <majsynth/ga.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace majsynth
{

struct setting
{
  std::string key;
  std::string value;
};

struct problem
{
  circuit_spec spec;
  std::vector<setting> settings; /* in file order; later lines win */
};

/*! \brief Parses a problem file; throws parse_error with the offending line and column. */
problem parse_problem( std::string_view text );
problem load_problem( const std::string& path );

/*! \brief Applies one named parameter; throws config_error on unknown keys or malformed values. */
void apply_setting( ga_config& cfg, const std::string& key, const std::string& value );
void apply_settings( ga_config& cfg, const std::vector<setting>& settings );

std::string to_string( output_order order );
output_order parse_output_order( const std::string& text );

/*! \brief Problem text in the same format, for writing corpus specs to disk. */
std::string format_problem( const circuit_spec& spec );

} // namespace majsynth
