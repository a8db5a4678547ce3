#pragma once

#include <stdexcept>
#include <string>

namespace fht {

// Configuration / input-file problems. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid strip geometry or an unsupported process/boundary combination.
// CLI maps this to exit code 3.
class StripError : public std::runtime_error {
 public:
  explicit StripError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine detected a non-recoverable instability (severe
// negativity, non-finite transform value, underflowing denominator).
// CLI maps this to exit code 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fht
