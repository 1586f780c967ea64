#pragma once

#include <stdexcept>
#include <string>

namespace solenoid {

// Error taxonomy mirrors the CLI exit-code contract:
//   Parse/Usage -> 1, Precondition -> 2, Assumption/Internal -> 3.
enum class ErrorKind {
  Parse,
  Usage,
  Precondition,
  AssumptionViolated,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  int exit_code() const {
    switch (kind_) {
      case ErrorKind::Parse:
      case ErrorKind::Usage:
        return 1;
      case ErrorKind::Precondition:
        return 2;
      case ErrorKind::AssumptionViolated:
      case ErrorKind::Internal:
        return 3;
    }
    return 3;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace solenoid
