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

#ifndef QUILTGUARD_ERRORS_H_
#define QUILTGUARD_ERRORS_H_

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace quiltguard {

// Domain error kinds. Every non-OK status produced by this library carries one
// of these as a payload so callers (and tests) can branch on the kind without
// parsing messages.
enum class ErrorKind {
  kNonStochasticRow,
  kNegativeEntry,
  kBadInitial,
  kDuplicateLabel,
  kShapeMismatch,
  kInvalidTime,
  kInvalidGap,
  kOutOfRange,
  kInvalidLength,
  kNotIrreducible,
  kNotAperiodic,
  kZeroStationaryEntry,
  kDegenerateSpectrum,
  kEmptyThetaSet,
  kInvalidShape,
  kLengthMismatch,
  kInvalidEpsilon,
  kBadState,
  kInvalidFramework,
  kMixedFrameworks,
  kEmptyInput,
  kQuiltMismatch,
  kNegativeE,
  kOverlappingWindows,
  kNotApproxVariant,
  kTooLarge,
  kZeroProbabilitySecret,
  kSupportMismatch,
  kAlphabetMismatch,
  kParseError,
  kIoError,
  kUnknownRecord,
};

absl::string_view ErrorKindName(ErrorKind kind);

// Builds an InvalidArgument status (Unavailable for kIoError) tagged with
// `kind`. The message is prefixed with the kind name.
absl::Status DomainError(ErrorKind kind, absl::string_view detail);

// True iff `status` is non-OK and tagged with `kind`.
bool HasErrorKind(const absl::Status& status, ErrorKind kind);

// True iff `status` is non-OK and carries any error-kind tag.
bool IsDomainError(const absl::Status& status);

}  // namespace quiltguard

#endif  // QUILTGUARD_ERRORS_H_
