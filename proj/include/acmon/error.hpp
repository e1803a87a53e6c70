#pragma once

#include <stdexcept>
#include <string>

namespace acmon {

enum class ErrorKind {
  OutOfRange,
  EmptyInput,
  AllOneClass,
  InvalidArgument,
  NotFitted,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::AllOneClass: return "AllOneClass";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotFitted: return "NotFitted";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

// All input/data errors raised by the library. Internal invariant
// violations use std::logic_error instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace acmon
