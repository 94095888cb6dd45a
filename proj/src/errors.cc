// Copyright 2026 The Quiltguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quiltguard/errors.h"

#include <optional>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace quiltguard {
namespace {

constexpr absl::string_view kPayloadUrl = "quiltguard/error-kind";

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonStochasticRow: return "NonStochasticRow";
    case ErrorKind::kNegativeEntry: return "NegativeEntry";
    case ErrorKind::kBadInitial: return "BadInitial";
    case ErrorKind::kDuplicateLabel: return "DuplicateLabel";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kInvalidTime: return "InvalidTime";
    case ErrorKind::kInvalidGap: return "InvalidGap";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kInvalidLength: return "InvalidLength";
    case ErrorKind::kNotIrreducible: return "NotIrreducible";
    case ErrorKind::kNotAperiodic: return "NotAperiodic";
    case ErrorKind::kZeroStationaryEntry: return "ZeroStationaryEntry";
    case ErrorKind::kDegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::kEmptyThetaSet: return "EmptyThetaSet";
    case ErrorKind::kInvalidShape: return "InvalidShape";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kInvalidEpsilon: return "InvalidEpsilon";
    case ErrorKind::kBadState: return "BadState";
    case ErrorKind::kInvalidFramework: return "InvalidFramework";
    case ErrorKind::kMixedFrameworks: return "MixedFrameworks";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kQuiltMismatch: return "QuiltMismatch";
    case ErrorKind::kNegativeE: return "NegativeE";
    case ErrorKind::kOverlappingWindows: return "OverlappingWindows";
    case ErrorKind::kNotApproxVariant: return "NotApproxVariant";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kZeroProbabilitySecret: return "ZeroProbabilitySecret";
    case ErrorKind::kSupportMismatch: return "SupportMismatch";
    case ErrorKind::kAlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kUnknownRecord: return "UnknownRecord";
  }
  return "Unknown";
}

absl::Status DomainError(ErrorKind kind, absl::string_view detail) {
  const std::string message = absl::StrCat(ErrorKindName(kind), ": ", detail);
  absl::Status status = kind == ErrorKind::kIoError
                            ? absl::UnavailableError(message)
                            : absl::InvalidArgumentError(message);
  status.SetPayload(kPayloadUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  if (status.ok()) return false;
  auto payload = status.GetPayload(kPayloadUrl);
  return payload.has_value() && *payload == ErrorKindName(kind);
}

bool IsDomainError(const absl::Status& status) {
  return !status.ok() && status.GetPayload(kPayloadUrl).has_value();
}

}  // namespace quiltguard
