#pragma once

#include <stdexcept>
#include <string>

namespace hopim {

/// Invalid user-supplied configuration (bad flag combination, k out of range).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (parse errors, invariant violations).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hopim
