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

#ifndef QUILTGUARD_FIT_H_
#define QUILTGUARD_FIT_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "quiltguard/chain.h"

namespace quiltguard {

struct FitConfig {
  // Additive pseudo-count on every transition and initial-state cell.
  double alpha = 1.0;
  int min_sequences = 1;
};

// Maximum-likelihood chain with additive smoothing:
//   P[u][v] = (n(u -> v) + alpha) / (n(u -> .) + k alpha)
//   q[u]    = (n(first = u) + alpha) / (n_sequences + k alpha)
// A source state with no outgoing transitions and alpha = 0 gets a uniform
// row. Without `states` the alphabet is the sorted set of observed labels;
// with it, any other label fails with AlphabetMismatch.
absl::StatusOr<ChainModel> FitChain(
    const std::vector<std::vector<std::string>>& sequences,
    const FitConfig& config = {},
    const std::optional<std::vector<std::string>>& states = std::nullopt);

}  // namespace quiltguard

#endif  // QUILTGUARD_FIT_H_
