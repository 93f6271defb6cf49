#pragma once

#include <stdexcept>
#include <string>

namespace ventsim {

/// Invalid scenario, settings or parameter block. Raised before any stepping.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or bookkeeping invariant broke while the simulation was running.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ventsim
