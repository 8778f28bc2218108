#pragma once

#include <stdexcept>
#include <string>

namespace mmdd {

// Numeric values are shared with the C API (mmdd.h); keep them in sync.
enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  empty_input = 2,
  insufficient_data = 3,
  numeric = 4,
  config = 5,
  ingestion = 6,
  validation = 7,
  resolution = 8,
  orchestration = 9,
  plotting = 10,
  io = 11,
  internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) {
    throw Error(code, message);
  }
}

}  // namespace mmdd
