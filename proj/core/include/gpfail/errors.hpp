#pragma once

#include <stdexcept>
#include <string>

namespace gpfail {

// Invalid argument values, malformed configuration, contract violations.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Factorization failures, non-finite objective values and the like.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gpfail
