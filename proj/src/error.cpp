#include "error.hpp"

namespace shc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateNoise: return "DegenerateNoise";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::SingularDiscretization: return "SingularDiscretization";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace shc
