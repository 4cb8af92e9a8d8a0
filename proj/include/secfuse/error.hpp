/*
 * Copyright 2026 The secfuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace secfuse {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidSubset,
  kNotReconstructible,
  kInsufficientRedundancy,
  kReconstructibleRegime,
  kEnumerationCap,
  kMissingEstimate,
  kMissingGamma,
  kUnknownAnchor,
  kCountExceedsMembership,
  kConfig,
  kIo,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kInvalidSubset: return "invalid-subset";
    case ErrorKind::kNotReconstructible: return "not-reconstructible";
    case ErrorKind::kInsufficientRedundancy: return "insufficient-redundancy";
    case ErrorKind::kReconstructibleRegime: return "reconstructible-regime";
    case ErrorKind::kEnumerationCap: return "enumeration-cap";
    case ErrorKind::kMissingEstimate: return "missing-estimate";
    case ErrorKind::kMissingGamma: return "missing-gamma";
    case ErrorKind::kUnknownAnchor: return "unknown-anchor";
    case ErrorKind::kCountExceedsMembership: return "count-exceeds-membership";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace secfuse
