#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qla {

enum class Errc {
  ZeroQuaternion,
  DimensionMismatch,
  NotSquare,
  NotHermitian,
  NotSymplectic,
  NoConvergence,
  PairingFailure,
  ReconstructionFailure,
  ZeroVector,
  NotCritical,
  NotTangent,
  IndexOutOfRange,
  EmptySubspace,
  NotTwoByTwo,
  RootSolverFailure,
  NotLeftEigenvalue,
  PreconditionNotMet,
  ParseError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroQuaternion: return "ZeroQuaternion";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotSymplectic: return "NotSymplectic";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::PairingFailure: return "PairingFailure";
    case Errc::ReconstructionFailure: return "ReconstructionFailure";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::NotCritical: return "NotCritical";
    case Errc::NotTangent: return "NotTangent";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::EmptySubspace: return "EmptySubspace";
    case Errc::NotTwoByTwo: return "NotTwoByTwo";
    case Errc::RootSolverFailure: return "RootSolverFailure";
    case Errc::NotLeftEigenvalue: return "NotLeftEigenvalue";
    case Errc::PreconditionNotMet: return "PreconditionNotMet";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every library failure carries one of the codes above; the CLI maps them
/// onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qla
