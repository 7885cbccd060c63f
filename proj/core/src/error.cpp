#include "romanlens/error.hpp"

namespace romanlens {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NumericInput: return "numeric-input";
    case ErrorKind::DivergenceUndefined: return "divergence-undefined";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::Range: return "range";
    case ErrorKind::Format: return "format";
    case ErrorKind::IncompleteCheckpoint: return "incomplete-checkpoint";
    case ErrorKind::Length: return "length";
    case ErrorKind::Plan: return "plan";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Losslessness: return "losslessness";
    case ErrorKind::Mode: return "mode";
    case ErrorKind::Inversion: return "inversion";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Data: return "data";
    case ErrorKind::Argument: return "argument";
    case ErrorKind::UndefinedStatistic: return "undefined-statistic";
    case ErrorKind::Spec: return "spec";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace romanlens
