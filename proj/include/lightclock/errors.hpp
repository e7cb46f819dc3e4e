#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lightclock {

enum class ErrorKind {
  OrderMismatch,
  OutOfGrid,
  Monotonicity,
  Unit,
  Causality,
  Parameter,
  Geometry,
  DegeneratePair,
  Superluminal,
  DivisionUndefined,
  Domain,
  Pole,
  Frame,
  Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::OrderMismatch: return "order mismatch";
    case ErrorKind::OutOfGrid: return "out of grid";
    case ErrorKind::Monotonicity: return "monotonicity";
    case ErrorKind::Unit: return "unit mismatch";
    case ErrorKind::Causality: return "causality";
    case ErrorKind::Parameter: return "invalid parameter";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::DegeneratePair: return "degenerate pair";
    case ErrorKind::Superluminal: return "superluminal parameter";
    case ErrorKind::DivisionUndefined: return "division undefined";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Frame: return "frame";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace lightclock
