#pragma once

#include <stdexcept>
#include <string>

namespace nlspec {

// Invalid input or violated hypothesis detected before any numerics run.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver failed to converge or a measured hypothesis does not hold.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlspec
