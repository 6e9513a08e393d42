// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rwre {

enum class ErrorCode {
  kNonpositiveAtom,
  kProbSum,
  kBadBranching,
  kDegenerate,
  kNegativeT,
  kNonpositiveR,
  kKappaOutOfRange,
  kNotCritical,
  kTreeTooLarge,
  kDepthTooLarge,
  kBadTheta,
  kBadPoolSize,
  kKTooLarge,
  kDegenerateTail,
  kNonpositiveSample,
  kZeroMean,
  kTooManyComponents,
  kNotCentered,
  kDiverged,
  kWrongRegime,
  kDegeneratePoints,
  kInvalidArgument,
  kConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Validation or domain error raised by any rwre operation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rwre
