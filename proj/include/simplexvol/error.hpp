#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace simplexvol {

/// Failure categories raised by the library. One exception type carries the
/// category so callers (the CLI in particular) can map it to an exit code.
enum class Errc {
  IndexOutOfRange,
  ConvergenceFailure,
  NotPSD,
  BadSignVector,
  BadAngles,
  EntryOutOfRange,
  TooLarge,
  LPNumericalFailure,
  NotInClosure,
  RankTooHigh,
  DimMismatch,
  NotHyperbolicGram,
  NoTimelikeSolution,
  NotSphericalGram,
  NotEuclideanGram,
  DegenerateSimplex,
  SingularNormalMatrix,
  NotInDomain,
  NonConvergent,
  NotTriangle,
  NoNegativeEigenvalue,
  MultipleNegativeEigenvalues,
  SizeMismatch,
  EndpointOutOfDomain,
  InvalidArgument,
};

inline constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::NotPSD: return "NotPSD";
    case Errc::BadSignVector: return "BadSignVector";
    case Errc::BadAngles: return "BadAngles";
    case Errc::EntryOutOfRange: return "EntryOutOfRange";
    case Errc::TooLarge: return "TooLarge";
    case Errc::LPNumericalFailure: return "LPNumericalFailure";
    case Errc::NotInClosure: return "NotInClosure";
    case Errc::RankTooHigh: return "RankTooHigh";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NotHyperbolicGram: return "NotHyperbolicGram";
    case Errc::NoTimelikeSolution: return "NoTimelikeSolution";
    case Errc::NotSphericalGram: return "NotSphericalGram";
    case Errc::NotEuclideanGram: return "NotEuclideanGram";
    case Errc::DegenerateSimplex: return "DegenerateSimplex";
    case Errc::SingularNormalMatrix: return "SingularNormalMatrix";
    case Errc::NotInDomain: return "NotInDomain";
    case Errc::NonConvergent: return "NonConvergent";
    case Errc::NotTriangle: return "NotTriangle";
    case Errc::NoNegativeEigenvalue: return "NoNegativeEigenvalue";
    case Errc::MultipleNegativeEigenvalues: return "MultipleNegativeEigenvalues";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::EndpointOutOfDomain: return "EndpointOutOfDomain";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace simplexvol
