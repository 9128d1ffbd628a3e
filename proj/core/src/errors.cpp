#include "svdlab/errors.hpp"

namespace svdlab {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NonFinite: return "NonFinite";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::ZeroCoupling: return "ZeroCoupling";
    case Errc::PoleEvaluation: return "PoleEvaluation";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::SchemeFailure: return "SchemeFailure";
    case Errc::InterlacingViolation: return "InterlacingViolation";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::EmptyModel: return "EmptyModel";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace svdlab
