#pragma once

#include <stdexcept>
#include <string>

namespace granular {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (|z| > 1, u = 0 for a
// Jacobian, out-of-cone inverse, ...).
struct DomainError : Error {
  using Error::Error;
};

// A numerical procedure failed: quadrature or root-finder non-convergence,
// stiff ODE, non-finite particle state.
struct NumericError : Error {
  using Error::Error;
};

// Malformed or inconsistent configuration. Carries the offending line and key
// when they are known.
struct ConfigError : Error {
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : Error(what), line(line), key(std::move(key)) {}
  int line;
  std::string key;
};

}  // namespace granular
