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

#ifndef QUILTGUARD_CHAIN_H_
#define QUILTGUARD_CHAIN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "quiltguard/matrix.h"
#include "quiltguard/random.h"

namespace quiltguard {

using Distribution = std::vector<double>;

// Tolerance on row sums and the initial distribution's total mass.
inline constexpr double kStochasticTolerance = 1e-9;

// Checks the invariants of a finite-state chain description. The error names
// the first violated constraint.
absl::Status ValidateChain(const std::vector<std::string>& states,
                           const Distribution& initial,
                           const Matrix& transition);

// One adversary belief: a time-homogeneous chain (q, P) over k labelled
// states. Immutable once created; instances always satisfy ValidateChain.
class ChainModel {
 public:
  // Validates, then renormalizes each row of `transition` and `initial` so
  // they sum to exactly one in floating point.
  static absl::StatusOr<ChainModel> Create(std::vector<std::string> states,
                                           Distribution initial,
                                           Matrix transition);

  // States are labelled "0", "1", ....
  static absl::StatusOr<ChainModel> FromProbabilities(
      Distribution initial, const std::vector<std::vector<double>>& transition);

  std::size_t num_states() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const Distribution& initial() const { return initial_; }
  const Matrix& transition() const { return transition_; }

  std::optional<int> StateIndex(std::string_view label) const;

  friend bool operator==(const ChainModel&, const ChainModel&) = default;

 private:
  ChainModel(std::vector<std::string> states, Distribution initial,
             Matrix transition)
      : states_(std::move(states)),
        initial_(std::move(initial)),
        transition_(std::move(transition)) {}

  std::vector<std::string> states_;
  Distribution initial_;
  Matrix transition_;
};

// A realized path X_1..X_T as state indices.
struct StateSequence {
  std::vector<int> values;

  int length() const { return static_cast<int>(values.size()); }
  friend bool operator==(const StateSequence&, const StateSequence&) = default;
};

// Distribution of X_t, i.e. q * P^(t-1). Time indices are 1-based.
absl::StatusOr<Distribution> Marginal(const ChainModel& model, int t);

// Entry [v][u] = P(X_{i+gap} = u | X_i = v) = (P^gap)[v][u].
absl::StatusOr<Matrix> ForwardConditional(const ChainModel& model, int gap);

// P(X_{i-gap} = u | X_i = v) in entry [v][u]. Rows whose conditioning event
// has zero probability are left at zero and flagged as undefined.
struct BackwardConditional {
  Matrix probabilities;
  std::vector<bool> defined;
};
absl::StatusOr<BackwardConditional> BackwardConditionalAt(
    const ChainModel& model, int node, int gap);

struct SpectralInfo {
  Distribution stationary;
  double pi_min = 0.0;
  // Time reversal: reversal(u, v) = pi[v] * P(v, u) / pi[u].
  Matrix reversal;
  // min{1 - |lambda|} over eigenvalues of P * reversal with |lambda| < 1.
  double gap = 0.0;
  // Eigenvalues of P * reversal, descending.
  std::vector<double> eigenvalues;
};

// Stationary distribution, time reversal and eigen-gap. Requires an
// irreducible, aperiodic chain whose product P * P^* has a simple unit
// eigenvalue.
absl::StatusOr<SpectralInfo> Spectral(const ChainModel& model);

// Structural checks on the positive-entry digraph of P.
bool IsIrreducible(const Matrix& transition);
int Period(const Matrix& transition);

// Stationary distribution by power iteration from uniform until
// ||pi P - pi||_1 <= 1e-10, falling back to a direct solve.
Distribution StationaryDistribution(const Matrix& transition);

// Draws X_1 ~ q, X_{t+1} ~ P[X_t]. Deterministic in `seed`.
absl::StatusOr<StateSequence> Sample(const ChainModel& model, int length,
                                     std::uint64_t seed);

// A chain with every initial and transition entry drawn uniformly from the
// simplex, so strictly positive (hence irreducible and aperiodic) with
// probability one. For randomized checks.
ChainModel RandomPositiveModel(int num_states, Rng& rng);

}  // namespace quiltguard

#endif  // QUILTGUARD_CHAIN_H_
