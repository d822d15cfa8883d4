#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

enum class ErrorKind {
  invalid_argument,
  malformed_input,
  scope_limit,
  grid_mismatch,
  ill_conditioned,
  hypothesis_violated,
  unreliable_point,
  class_violation,
  io
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace fraclab
