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

#ifndef QUILTGUARD_INFLUENCE_H_
#define QUILTGUARD_INFLUENCE_H_

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "quiltguard/chain.h"
#include "quiltguard/matrix.h"

namespace quiltguard {

// Closed interval [start, end] of 1-based time indices.
struct Window {
  int start = 1;
  int end = 1;

  int length() const { return end - start + 1; }
  bool Contains(int t) const { return start <= t && t <= end; }
  friend bool operator==(const Window&, const Window&) = default;
};

enum class QuiltKind { kTwoSided, kLeftOnly, kRightOnly, kEmpty };

// A minimal Markov quilt of a chain node: the quilt nodes are X_{node-left}
// and/or X_{node+right}. Removing them leaves the nearby block around `node`
// and the remote remainder.
struct QuiltShape {
  int node = 1;
  std::optional<int> left;
  std::optional<int> right;

  QuiltKind kind() const;
  std::string DebugString() const;
  friend bool operator==(const QuiltShape&, const QuiltShape&) = default;
};

absl::Status ValidateShape(const QuiltShape& shape, Window window);

// Number of nodes in the nearby block when the chain is restricted to
// `window`. Two-sided: a + b - 1; left-only: nodes node-a+1..end; right-only:
// start..node+b-1; empty: the whole window.
int NearbySize(const QuiltShape& shape, Window window);
inline int NearbySize(const QuiltShape& shape, int horizon) {
  return NearbySize(shape, Window{1, horizon});
}

enum class InfluenceMethod { kExact, kApprox };

// Max-influence of a node on a quilt. +infinity is a legitimate value (a
// quilt realization possible under one secret and impossible under another)
// and is stored as IEEE infinity, never as a large finite number.
struct InfluenceValue {
  double value = 0.0;
  InfluenceMethod method = InfluenceMethod::kExact;

  bool is_infinite() const { return value == kInfinity; }
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();
};

// Precomputes the matrix powers and marginals needed to evaluate exact
// max-influence for many quilts of one chain up to `max_time`.
class ExactInfluenceTable {
 public:
  ExactInfluenceTable(const ChainModel& model, int max_time);

  // Max over secret values u != v (both with positive marginal at the node)
  // and quilt realizations of log P(x_Q | X_i = u) / P(x_Q | X_i = v). The
  // left and right quilt nodes are independent given X_i, so the quilt
  // probability factors into a backward and a forward term.
  absl::StatusOr<InfluenceValue> Evaluate(const QuiltShape& shape) const;

  int max_time() const { return max_time_; }

 private:
  const Matrix& Power(int exponent) const { return powers_[exponent]; }
  const Distribution& MarginalAt(int t) const { return marginals_[t]; }

  int max_time_;
  std::size_t num_states_;
  std::vector<Matrix> powers_;          // powers_[e] = P^e, e in [0, max_time)
  std::vector<Distribution> marginals_;  // marginals_[t], t in [1, max_time]
};

absl::StatusOr<InfluenceValue> ExactMaxInfluence(const ChainModel& model,
                                                 const QuiltShape& shape);

// Spectral upper bound on max-influence. For a two-sided quilt this is
//   2 * h(a) + h(b),  h(x) = log((pi_min + e^{-g x / 2}) / (pi_min - e^{-g x / 2}))
// valid when a, b >= 2 log(1 / pi_min) / g. A left-only quilt uses 2 * h(a)
// and a right-only quilt h(b). Returns +infinity whenever an offset is below
// the threshold or the logarithm's argument is not positive.
InfluenceValue ApproxMaxInfluence(const SpectralInfo& spectral,
                                  const QuiltShape& shape);

// Offset below which the spectral bound does not apply.
double ApproxOffsetThreshold(const SpectralInfo& spectral);

// Supremum over a belief set.
absl::StatusOr<InfluenceValue> InfluenceOverSet(
    std::span<const ChainModel> models, const QuiltShape& shape,
    InfluenceMethod method);

}  // namespace quiltguard

#endif  // QUILTGUARD_INFLUENCE_H_
