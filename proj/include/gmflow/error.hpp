#pragma once

#include <stdexcept>
#include <string>

namespace gmflow {

enum class ErrorKind {
  CapExceeded,
  DimMismatch,
  NotGM,
  NotInverse,
  NotClosed,
  NotCrossSection,
  NotInvariant,
  NotACongruence,
  UniverseMismatch,
  UniverseOverflow,
  HullViolation,
  FlowVerificationFailed,
  SliceViolation,
  InternalInconsistency,
  ParseError,
};

inline char const* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NotGM: return "NotGM";
    case ErrorKind::NotInverse: return "NotInverse";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::NotCrossSection: return "NotCrossSection";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotACongruence: return "NotACongruence";
    case ErrorKind::UniverseMismatch: return "UniverseMismatch";
    case ErrorKind::UniverseOverflow: return "UniverseOverflow";
    case ErrorKind::HullViolation: return "HullViolation";
    case ErrorKind::FlowVerificationFailed: return "FlowVerificationFailed";
    case ErrorKind::SliceViolation: return "SliceViolation";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string const& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gmflow
