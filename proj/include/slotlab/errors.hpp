#pragma once
#include <stdexcept>

namespace slotlab {

// Bad or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical stability or resolution guard tripped (CLI exit code 1).
struct NumericalGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slotlab
