#pragma once

#include <stdexcept>
#include <string>

namespace hsqg {

/// Argument outside the domain of a transform or constructor.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two successive quadrature refinements disagree beyond tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reduced state lost a structural invariant (monotonicity, contraction, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsqg
