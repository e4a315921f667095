#pragma once

#include <stdexcept>

namespace waverisk {

// Error taxonomy mirrored by the CLI exit codes: data_error -> 2,
// config_error -> 3, numeric_error -> 4. Precondition violations inside the
// library throw std::invalid_argument and indicate a caller bug.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace waverisk
