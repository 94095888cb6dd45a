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

#include "quiltguard/chain.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <span>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "quiltguard/errors.h"
#include "quiltguard/random.h"

namespace quiltguard {
namespace {

constexpr double kStationaryResidual = 1e-10;
constexpr int kPowerIterationCap = 1'000'000;
constexpr double kUnitEigenvalueTolerance = 1e-8;

double L1Residual(const Distribution& pi, const Matrix& p) {
  const Distribution next = VecMat(pi, p);
  double residual = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    residual += std::abs(next[i] - pi[i]);
  }
  return residual;
}

// Sums within a few ulps of one are left alone so that normalizing twice is
// the same as normalizing once.
constexpr double kNormalizedSlack = 64 * std::numeric_limits<double>::epsilon();

void Normalize(std::span<double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total > 0.0 && std::abs(total - 1.0) > kNormalizedSlack) {
    for (double& x : v) x /= total;
  }
}

// BFS levels from state 0 over edges with positive probability; -1 marks an
// unreachable state.
std::vector<int> BfsLevels(const Matrix& p) {
  const std::size_t k = p.rows();
  std::vector<int> level(k, -1);
  if (k == 0) return level;
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < k; ++v) {
      if (p(u, v) > 0.0 && level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      }
    }
  }
  return level;
}

}  // namespace

absl::Status ValidateChain(const std::vector<std::string>& states,
                           const Distribution& initial,
                           const Matrix& transition) {
  const std::size_t k = states.size();
  if (k == 0) {
    return DomainError(ErrorKind::kShapeMismatch, "chain needs at least one state");
  }
  std::set<std::string> seen;
  for (const std::string& label : states) {
    if (!seen.insert(label).second) {
      return DomainError(ErrorKind::kDuplicateLabel,
                         absl::StrCat("state label '", label, "' repeats"));
    }
  }
  if (initial.size() != k || transition.rows() != k || transition.cols() != k) {
    return DomainError(
        ErrorKind::kShapeMismatch,
        absl::StrFormat("expected %d states, got initial of size %d and a "
                        "%dx%d transition matrix",
                        k, initial.size(), transition.rows(), transition.cols()));
  }
  for (std::size_t r = 0; r < k; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double x = transition(r, c);
      if (!(x >= 0.0 && x <= 1.0)) {
        return DomainError(
            ErrorKind::kNegativeEntry,
            absl::StrFormat("transition[%d][%d] = %g is outside [0, 1]", r, c, x));
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance) {
      return DomainError(ErrorKind::kNonStochasticRow,
                         absl::StrFormat("row %d sums to %.17g", r, sum));
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(initial[i] >= 0.0 && initial[i] <= 1.0)) {
      return DomainError(
          ErrorKind::kBadInitial,
          absl::StrFormat("initial[%d] = %g is outside [0, 1]", i, initial[i]));
    }
    total += initial[i];
  }
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    return DomainError(ErrorKind::kBadInitial,
                       absl::StrFormat("initial distribution sums to %.17g", total));
  }
  return absl::OkStatus();
}

absl::StatusOr<ChainModel> ChainModel::Create(std::vector<std::string> states,
                                              Distribution initial,
                                              Matrix transition) {
  if (absl::Status status = ValidateChain(states, initial, transition);
      !status.ok()) {
    return status;
  }
  Normalize(initial);
  for (std::size_t r = 0; r < transition.rows(); ++r) {
    Normalize(transition.row(r));
  }
  return ChainModel(std::move(states), std::move(initial), std::move(transition));
}

absl::StatusOr<ChainModel> ChainModel::FromProbabilities(
    Distribution initial, const std::vector<std::vector<double>>& transition) {
  std::vector<std::string> states;
  for (std::size_t i = 0; i < transition.size(); ++i) {
    states.push_back(absl::StrCat(i));
  }
  return Create(std::move(states), std::move(initial),
                Matrix::FromRows(transition));
}

std::optional<int> ChainModel::StateIndex(std::string_view label) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

absl::StatusOr<Distribution> Marginal(const ChainModel& model, int t) {
  if (t < 1) {
    return DomainError(ErrorKind::kInvalidTime,
                       absl::StrCat("time index ", t, " is before X_1"));
  }
  if (t == 1) return model.initial();
  Distribution marginal =
      VecMat(model.initial(), StochasticPower(model.transition(), t - 1));
  Normalize(marginal);
  return marginal;
}

absl::StatusOr<Matrix> ForwardConditional(const ChainModel& model, int gap) {
  if (gap < 1) {
    return DomainError(ErrorKind::kInvalidGap,
                       absl::StrCat("forward gap must be >= 1, got ", gap));
  }
  return StochasticPower(model.transition(), gap);
}

absl::StatusOr<BackwardConditional> BackwardConditionalAt(
    const ChainModel& model, int node, int gap) {
  if (gap < 1 || node - gap < 1) {
    return DomainError(
        ErrorKind::kOutOfRange,
        absl::StrFormat("cannot look back %d steps from X_%d", gap, node));
  }
  const std::size_t k = model.num_states();
  absl::StatusOr<Distribution> earlier = Marginal(model, node - gap);
  if (!earlier.ok()) return earlier.status();
  const Matrix power = StochasticPower(model.transition(), gap);
  // Marginal at `node` is derived from the same power so that each defined
  // row normalizes exactly.
  const Distribution current = VecMat(*earlier, power);

  BackwardConditional result{Matrix(k, k), std::vector<bool>(k, false)};
  for (std::size_t v = 0; v < k; ++v) {
    if (current[v] <= 0.0) continue;
    result.defined[v] = true;
    double row_sum = 0.0;
    for (std::size_t u = 0; u < k; ++u) {
      const double x = (*earlier)[u] * power(u, v) / current[v];
      result.probabilities(v, u) = x;
      row_sum += x;
    }
    for (std::size_t u = 0; u < k; ++u) result.probabilities(v, u) /= row_sum;
  }
  return result;
}

bool IsIrreducible(const Matrix& transition) {
  const std::vector<int> forward = BfsLevels(transition);
  const std::vector<int> backward = BfsLevels(transition.Transposed());
  for (std::size_t i = 0; i < forward.size(); ++i) {
    if (forward[i] < 0 || backward[i] < 0) return false;
  }
  return true;
}

int Period(const Matrix& transition) {
  // For an irreducible chain the period is the gcd over edges (u, v) of
  // level(u) + 1 - level(v).
  const std::vector<int> level = BfsLevels(transition);
  int period = 0;
  for (std::size_t u = 0; u < transition.rows(); ++u) {
    if (level[u] < 0) continue;
    for (std::size_t v = 0; v < transition.cols(); ++v) {
      if (transition(u, v) > 0.0 && level[v] >= 0) {
        period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return period;
}

Distribution StationaryDistribution(const Matrix& transition) {
  const std::size_t k = transition.rows();
  Distribution pi(k, 1.0 / static_cast<double>(k));
  for (int iter = 0; iter < kPowerIterationCap; ++iter) {
    if (L1Residual(pi, transition) <= kStationaryResidual) return pi;
    pi = VecMat(pi, transition);
    Normalize(pi);
  }
  // Slow mixing: solve pi (P - I) = 0 with the last equation replaced by the
  // normalization constraint.
  Matrix system = transition.Transposed();
  for (std::size_t i = 0; i < k; ++i) system(i, i) -= 1.0;
  std::vector<double> rhs(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) system(k - 1, c) = 1.0;
  rhs[k - 1] = 1.0;
  std::vector<double> solved = SolveLinearSystem(system, rhs);
  if (solved.empty()) return pi;
  for (double& x : solved) x = std::max(x, 0.0);
  Normalize(solved);
  return solved;
}

absl::StatusOr<SpectralInfo> Spectral(const ChainModel& model) {
  const Matrix& p = model.transition();
  const std::size_t k = model.num_states();
  if (!IsIrreducible(p)) {
    return DomainError(ErrorKind::kNotIrreducible,
                       "some state cannot reach every other state");
  }
  if (const int period = Period(p); period != 1) {
    return DomainError(ErrorKind::kNotAperiodic,
                       absl::StrCat("chain has period ", period));
  }

  SpectralInfo info;
  info.stationary = StationaryDistribution(p);
  info.pi_min = *std::min_element(info.stationary.begin(), info.stationary.end());
  if (info.pi_min <= 0.0) {
    return DomainError(ErrorKind::kZeroStationaryEntry,
                       "stationary distribution has a zero entry");
  }

  info.reversal = Matrix(k, k);
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = 0; v < k; ++v) {
      info.reversal(u, v) = info.stationary[v] * p(v, u) / info.stationary[u];
    }
  }

  // P P^* is self-adjoint in L2(pi), so D^{1/2} (P P^*) D^{-1/2} is symmetric.
  const Matrix product = p * info.reversal;
  Matrix symmetric(k, k);
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = 0; v < k; ++v) {
      symmetric(u, v) = std::sqrt(info.stationary[u] / info.stationary[v]) *
                        product(u, v);
    }
  }
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = u + 1; v < k; ++v) {
      const double mean = 0.5 * (symmetric(u, v) + symmetric(v, u));
      symmetric(u, v) = mean;
      symmetric(v, u) = mean;
    }
  }
  info.eigenvalues = SymmetricEigenvalues(symmetric);

  const double top = info.eigenvalues.front();
  if (std::abs(top - 1.0) > kUnitEigenvalueTolerance) {
    return absl::InternalError(
        absl::StrFormat("largest eigenvalue of P P^* is %.17g, expected 1", top));
  }
  int unit_count = 0;
  info.gap = 1.0;
  for (double lambda : info.eigenvalues) {
    if (std::abs(lambda) >= 1.0 - kUnitEigenvalueTolerance) {
      ++unit_count;
    } else {
      info.gap = std::min(info.gap, 1.0 - std::abs(lambda));
    }
  }
  if (unit_count > 1) {
    return DomainError(
        ErrorKind::kDegenerateSpectrum,
        absl::StrCat("eigenvalue 1 of P P^* has multiplicity ", unit_count,
                     "; the eigen-gap is not defined"));
  }
  return info;
}

absl::StatusOr<StateSequence> Sample(const ChainModel& model, int length,
                                     std::uint64_t seed) {
  if (length < 1) {
    return DomainError(ErrorKind::kInvalidLength,
                       absl::StrCat("sequence length must be >= 1, got ", length));
  }
  Rng rng(seed);
  StateSequence out;
  out.values.reserve(length);
  int state = SampleIndex(model.initial(), rng);
  out.values.push_back(state);
  for (int t = 1; t < length; ++t) {
    state = SampleIndex(model.transition().row(state), rng);
    out.values.push_back(state);
  }
  return out;
}

namespace {

std::vector<double> RandomSimplexPoint(int n, Rng& rng) {
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) {
    x = -std::log(UniformOpen01(rng));
    total += x;
  }
  for (double& x : v) x /= total;
  return v;
}

}  // namespace

ChainModel RandomPositiveModel(int num_states, Rng& rng) {
  std::vector<std::vector<double>> rows;
  for (int r = 0; r < num_states; ++r) {
    rows.push_back(RandomSimplexPoint(num_states, rng));
  }
  Distribution initial = RandomSimplexPoint(num_states, rng);
  return *ChainModel::FromProbabilities(std::move(initial), rows);
}

}  // namespace quiltguard
