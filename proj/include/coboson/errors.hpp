#pragma once

#include <stdexcept>
#include <string>

namespace coboson {

enum class ErrorKind {
  invalid_parameter,
  degenerate_input,
  numerical_failure,
  capacity_exceeded,
  io_failure,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::capacity_exceeded: return "capacity";
    case ErrorKind::io_failure: return "io-failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& what) : Error(ErrorKind::invalid_parameter, what) {}
};

struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& what) : Error(ErrorKind::degenerate_input, what) {}
};

struct NumericalFailure : Error {
  explicit NumericalFailure(const std::string& what) : Error(ErrorKind::numerical_failure, what) {}
};

struct CapacityExceeded : Error {
  explicit CapacityExceeded(const std::string& what) : Error(ErrorKind::capacity_exceeded, what) {}
};

struct IoFailure : Error {
  explicit IoFailure(const std::string& what) : Error(ErrorKind::io_failure, what) {}
};

}  // namespace coboson
