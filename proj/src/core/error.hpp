// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ptomo {

enum class ErrorCode {
  invalid_argument = 1,
  io = 2,
  format = 3,
  numerical = 4,
  mismatch = 5,
  ill_posed = 6,
  overflow = 7,
};

/// Exception type thrown throughout the core. The code survives the trip
/// through the C API unchanged.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

}  // namespace ptomo
