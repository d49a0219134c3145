#pragma once

#include <exception>
#include <stdexcept>

#include "simploscore/errors.hpp"

namespace simploscore::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2, kConsistencyFailure = 3 };

// Bad flags, or flags that do not fit the input (e.g. a window longer than the piece).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConsistencyError*>(&e) != nullptr) return kConsistencyFailure;
  if (dynamic_cast<const UsageError*>(&e) != nullptr) return kUsageError;
  return kDataError;
}

}  // namespace simploscore::cli
