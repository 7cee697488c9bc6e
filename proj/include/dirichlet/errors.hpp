#pragma once

#include <stdexcept>
#include <string>

namespace dirichlet {

// Argument outside a function's mathematical domain (pole, Re(z) <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computed quantity failed its own accuracy check, e.g. a Hardy Z value
// with a non-negligible imaginary part or a root bracket that lost its sign
// change.
class PrecisionFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public SolverError {
 public:
  using SolverError::SolverError;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dirichlet
