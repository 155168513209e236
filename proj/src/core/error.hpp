#pragma once

#include <stdexcept>
#include <string>

namespace cohort {

// Error categories align with the CLI exit codes and the C API status codes.
enum class ErrorCode : int {
  ok = 0,
  config = 2,
  missing_artifact = 3,
  runtime = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_config(const std::string& msg) {
  throw Error(ErrorCode::config, msg);
}

[[noreturn]] inline void throw_missing(const std::string& msg) {
  throw Error(ErrorCode::missing_artifact, msg);
}

[[noreturn]] inline void throw_runtime(const std::string& msg) {
  throw Error(ErrorCode::runtime, msg);
}

}  // namespace cohort
