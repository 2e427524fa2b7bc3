#pragma once

#include <stdexcept>
#include <string>

namespace rossby {

// Bad user input: malformed config file, unknown key, out-of-range value.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure mid-run: loss of density positivity, NaN/Inf in a state,
// a solve that cannot proceed. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A built-in acceptance assertion failed (monotonicity, conservation, ...).
// The CLI maps this to exit code 4.
class AcceptanceError : public std::runtime_error {
 public:
  explicit AcceptanceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rossby
