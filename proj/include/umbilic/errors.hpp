#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace umbilic {

// Base class for all workbench errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed expression text; `offset` is the byte position in the input.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t off)
      : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
  std::size_t offset;
};

// Input files or objects violating declared invariants (exit code 2).
struct ValidationError : Error {
  using Error::Error;
};

// Evaluation outside the mathematical domain (log of nonpositive, pole, ...).
struct DomainError : Error {
  using Error::Error;
};

// Numerical process failure: divergence, singular metric, focal crossing (exit code 3).
struct NumericError : Error {
  using Error::Error;
};

}  // namespace umbilic
