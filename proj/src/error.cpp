// SPDX-License-Identifier: Apache-2.0
#include "rwre/error.hpp"

namespace rwre {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNonpositiveAtom: return "NONPOSITIVE_ATOM";
    case ErrorCode::kProbSum: return "PROB_SUM";
    case ErrorCode::kBadBranching: return "BAD_BRANCHING";
    case ErrorCode::kDegenerate: return "DEGENERATE";
    case ErrorCode::kNegativeT: return "NEGATIVE_T";
    case ErrorCode::kNonpositiveR: return "NONPOSITIVE_R";
    case ErrorCode::kKappaOutOfRange: return "KAPPA_OUT_OF_RANGE";
    case ErrorCode::kNotCritical: return "NOT_CRITICAL";
    case ErrorCode::kTreeTooLarge: return "TREE_TOO_LARGE";
    case ErrorCode::kDepthTooLarge: return "DEPTH_TOO_LARGE";
    case ErrorCode::kBadTheta: return "BAD_THETA";
    case ErrorCode::kBadPoolSize: return "BAD_POOL_SIZE";
    case ErrorCode::kKTooLarge: return "K_TOO_LARGE";
    case ErrorCode::kDegenerateTail: return "DEGENERATE_TAIL";
    case ErrorCode::kNonpositiveSample: return "NONPOSITIVE_SAMPLE";
    case ErrorCode::kZeroMean: return "ZERO_MEAN";
    case ErrorCode::kTooManyComponents: return "TOO_MANY_COMPONENTS";
    case ErrorCode::kNotCentered: return "NOT_CENTERED";
    case ErrorCode::kDiverged: return "DIVERGED";
    case ErrorCode::kWrongRegime: return "WRONG_REGIME";
    case ErrorCode::kDegeneratePoints: return "DEGENERATE_POINTS";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kConfig: return "CONFIG";
  }
  return "UNKNOWN";
}

}  // namespace rwre
