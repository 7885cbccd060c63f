#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace romanlens {

enum class ErrorKind {
  NumericInput,
  DivergenceUndefined,
  Shape,
  Coverage,
  Range,
  Format,
  IncompleteCheckpoint,
  Length,
  Plan,
  Parse,
  Losslessness,
  Mode,
  Inversion,
  Schema,
  Data,
  Argument,
  UndefinedStatistic,
  Spec,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the toolkit carries a kind so callers (the CLI in
// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace romanlens
