/*!
  \file errors.hpp
  \brief Exception types shared by all modules
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace majsynth
{

/*! \brief Invalid problem data (minterm out of range, duplicate names, ...). */
class spec_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief API misuse, such as mixing tables of different arity. */
class usage_error : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/*! \brief A gene sequence or expression that does not form exactly one tree. */
class decode_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Rejected GA parameters. */
class config_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Problem-file syntax error with a 1-based line and column. */
class parse_error : public std::runtime_error
{
public:
  parse_error( std::size_t line, std::size_t column, const std::string& message )
      : std::runtime_error( std::to_string( line ) + ":" + std::to_string( column ) + ": " + message ),
        line_( line ), column_( column )
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

} // namespace majsynth
