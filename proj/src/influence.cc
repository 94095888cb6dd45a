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

#include "quiltguard/influence.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "quiltguard/errors.h"

namespace quiltguard {
namespace {

// max over x with numerator[x] > 0 of numerator[x] / denominator[x]; +inf
// when some such denominator is zero.
double MaxRatio(std::span<const double> numerator,
                std::span<const double> denominator) {
  double best = 0.0;
  for (std::size_t x = 0; x < numerator.size(); ++x) {
    if (numerator[x] <= 0.0) continue;
    if (denominator[x] <= 0.0) return InfluenceValue::kInfinity;
    best = std::max(best, numerator[x] / denominator[x]);
  }
  return best;
}

double SpectralTerm(const SpectralInfo& spectral, int offset) {
  const double decay = std::exp(-spectral.gap * offset / 2.0);
  const double denominator = spectral.pi_min - decay;
  if (denominator <= 0.0) return InfluenceValue::kInfinity;
  return std::log((spectral.pi_min + decay) / denominator);
}

}  // namespace

QuiltKind QuiltShape::kind() const {
  if (left && right) return QuiltKind::kTwoSided;
  if (left) return QuiltKind::kLeftOnly;
  if (right) return QuiltKind::kRightOnly;
  return QuiltKind::kEmpty;
}

std::string QuiltShape::DebugString() const {
  auto offset = [](const std::optional<int>& o) {
    return o ? absl::StrCat(*o) : std::string("-");
  };
  return absl::StrCat("{node=", node, " left=", offset(left),
                      " right=", offset(right), "}");
}

absl::Status ValidateShape(const QuiltShape& shape, Window window) {
  if (!window.Contains(shape.node)) {
    return DomainError(ErrorKind::kInvalidShape,
                       absl::StrFormat("node %d outside window [%d, %d]",
                                       shape.node, window.start, window.end));
  }
  if (shape.left && (*shape.left < 1 || shape.node - *shape.left < window.start)) {
    return DomainError(ErrorKind::kInvalidShape,
                       absl::StrCat("left offset invalid in ", shape.DebugString()));
  }
  if (shape.right && (*shape.right < 1 || shape.node + *shape.right > window.end)) {
    return DomainError(ErrorKind::kInvalidShape,
                       absl::StrCat("right offset invalid in ", shape.DebugString()));
  }
  return absl::OkStatus();
}

int NearbySize(const QuiltShape& shape, Window window) {
  switch (shape.kind()) {
    case QuiltKind::kTwoSided:
      return *shape.left + *shape.right - 1;
    case QuiltKind::kLeftOnly:
      return window.end - (shape.node - *shape.left);
    case QuiltKind::kRightOnly:
      return shape.node + *shape.right - window.start;
    case QuiltKind::kEmpty:
      return window.length();
  }
  return window.length();
}

ExactInfluenceTable::ExactInfluenceTable(const ChainModel& model, int max_time)
    : max_time_(std::max(max_time, 1)), num_states_(model.num_states()) {
  const Matrix& p = model.transition();
  powers_.reserve(max_time_);
  powers_.push_back(Matrix::Identity(num_states_));
  for (int e = 1; e < max_time_; ++e) {
    Matrix next = powers_.back() * p;
    for (std::size_t r = 0; r < num_states_; ++r) {
      for (std::size_t c = 0; c < num_states_; ++c) {
        next(r, c) = std::clamp(next(r, c), 0.0, 1.0);
      }
    }
    powers_.push_back(std::move(next));
  }
  marginals_.resize(max_time_ + 1);
  marginals_[1] = model.initial();
  for (int t = 2; t <= max_time_; ++t) {
    marginals_[t] = VecMat(marginals_[t - 1], p);
  }
}

absl::StatusOr<InfluenceValue> ExactInfluenceTable::Evaluate(
    const QuiltShape& shape) const {
  const int reach = shape.node + shape.right.value_or(0);
  if (shape.node < 1 || reach > max_time_ ||
      (shape.left && (*shape.left < 1 || shape.node - *shape.left < 1)) ||
      (shape.right && *shape.right < 1)) {
    return DomainError(ErrorKind::kInvalidShape,
                       absl::StrCat(shape.DebugString(),
                                    " does not fit a chain of length ", max_time_));
  }
  InfluenceValue result{0.0, InfluenceMethod::kExact};
  if (shape.kind() == QuiltKind::kEmpty) return result;

  const std::size_t k = num_states_;
  const Distribution& at_node = MarginalAt(shape.node);

  // Backward rows: backward[u][l] = P(X_{node-a} = l | X_node = u).
  std::vector<std::vector<double>> backward;
  if (shape.left) {
    const Distribution& earlier = MarginalAt(shape.node - *shape.left);
    const Matrix& power = Power(*shape.left);
    backward.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t u = 0; u < k; ++u) {
      double norm = 0.0;
      for (std::size_t l = 0; l < k; ++l) norm += earlier[l] * power(l, u);
      if (norm <= 0.0) continue;
      for (std::size_t l = 0; l < k; ++l) {
        backward[u][l] = earlier[l] * power(l, u) / norm;
      }
    }
  }

  double best = 0.0;
  for (std::size_t u = 0; u < k; ++u) {
    if (at_node[u] <= 0.0) continue;
    for (std::size_t v = 0; v < k; ++v) {
      if (v == u || at_node[v] <= 0.0) continue;
      double ratio = 1.0;
      if (shape.left) ratio *= MaxRatio(backward[u], backward[v]);
      if (shape.right) {
        const Matrix& forward = Power(*shape.right);
        ratio *= MaxRatio(forward.row(u), forward.row(v));
      }
      if (ratio == InfluenceValue::kInfinity) {
        result.value = InfluenceValue::kInfinity;
        return result;
      }
      if (ratio > 0.0) best = std::max(best, std::log(ratio));
    }
  }
  result.value = best;
  return result;
}

absl::StatusOr<InfluenceValue> ExactMaxInfluence(const ChainModel& model,
                                                 const QuiltShape& shape) {
  const ExactInfluenceTable table(model,
                                  shape.node + shape.right.value_or(0));
  return table.Evaluate(shape);
}

double ApproxOffsetThreshold(const SpectralInfo& spectral) {
  return 2.0 * std::log(1.0 / spectral.pi_min) / spectral.gap;
}

InfluenceValue ApproxMaxInfluence(const SpectralInfo& spectral,
                                  const QuiltShape& shape) {
  InfluenceValue result{0.0, InfluenceMethod::kApprox};
  const double threshold = ApproxOffsetThreshold(spectral);
  if ((shape.left && *shape.left < threshold) ||
      (shape.right && *shape.right < threshold)) {
    result.value = InfluenceValue::kInfinity;
    return result;
  }
  if (shape.left) result.value += 2.0 * SpectralTerm(spectral, *shape.left);
  if (shape.right) result.value += SpectralTerm(spectral, *shape.right);
  return result;
}

absl::StatusOr<InfluenceValue> InfluenceOverSet(
    std::span<const ChainModel> models, const QuiltShape& shape,
    InfluenceMethod method) {
  if (models.empty()) {
    return DomainError(ErrorKind::kEmptyThetaSet, "no chain models supplied");
  }
  InfluenceValue sup{0.0, method};
  for (const ChainModel& model : models) {
    InfluenceValue value;
    if (method == InfluenceMethod::kExact) {
      absl::StatusOr<InfluenceValue> exact = ExactMaxInfluence(model, shape);
      if (!exact.ok()) return exact.status();
      value = *exact;
    } else {
      absl::StatusOr<SpectralInfo> spectral = Spectral(model);
      if (!spectral.ok()) return spectral.status();
      value = ApproxMaxInfluence(*spectral, shape);
    }
    sup.value = std::max(sup.value, value.value);
  }
  return sup;
}

}  // namespace quiltguard
