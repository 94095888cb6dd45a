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

// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "quiltguard/chain.h"
#include "quiltguard/composition.h"
#include "quiltguard/influence.h"
#include "quiltguard/mechanism.h"
#include "quiltguard/oracle.h"
#include "quiltguard/random.h"

namespace quiltguard {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

int failures = 0;

void Report(int number, const std::string& name, bool passed, const std::string& detail) {
  std::printf("%s  %d. %-28s %s\n", passed ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!passed) ++failures;
}

int UniformInt(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Irreducible aperiodic chain with strictly positive initial distribution.
// Roughly a third of transition entries are zeroed before the structural
// checks, so sparse chains are exercised as well as dense ones.
ChainModel RandomErgodicModel(int k, Rng& rng) {
  for (;;) {
    std::vector<std::vector<double>> rows(k, std::vector<double>(k));
    for (auto& row : rows) {
      double total = 0.0;
      for (double& x : row) {
        x = UniformOpen01(rng) < 0.3 ? 0.0 : -std::log(UniformOpen01(rng));
        total += x;
      }
      if (total == 0.0) continue;
      for (double& x : row) x /= total;
    }
    std::vector<double> initial(k);
    double total = 0.0;
    for (double& x : initial) total += (x = -std::log(UniformOpen01(rng)));
    for (double& x : initial) x /= total;
    absl::StatusOr<ChainModel> model = ChainModel::FromProbabilities(initial, rows);
    if (!model.ok()) continue;
    if (IsIrreducible(model->transition()) && Period(model->transition()) == 1) {
      return *model;
    }
  }
}

bool SameQuiltShapes(const ReleaseRecord& a, const ReleaseRecord& b) {
  if (a.active_quilts.size() != b.active_quilts.size()) return false;
  for (std::size_t m = 0; m < a.active_quilts.size(); ++m) {
    const auto& lhs = a.active_quilts[m].nodes;
    const auto& rhs = b.active_quilts[m].nodes;
    if (lhs.size() != rhs.size()) return false;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (!(lhs[i].shape == rhs[i].shape)) return false;
    }
  }
  return true;
}

std::vector<int> AllNodes(int horizon) {
  std::vector<int> nodes(horizon);
  for (int t = 1; t <= horizon; ++t) nodes[t - 1] = t;
  return nodes;
}

void CounterexampleGolden() {
  const auto start = Clock::now();
  absl::StatusOr<CounterexampleReport> r = VerifyCounterexample();
  const double elapsed = Seconds(start);
  if (!r.ok()) {
    Report(1, "counterexample constants", false, r.status().ToString());
    return;
  }
  const bool constants = std::abs(r->single_low - 5.3132) <= 5e-4 &&
                         std::abs(r->single_high - 6.2672) <= 5e-4 &&
                         std::abs(r->joint_low - 4.4695) <= 5e-4 &&
                         std::abs(r->joint_high - 6.3448) <= 5e-4;
  const bool exceeds = std::max(r->joint_low, r->joint_high) >
                       std::max(r->single_low, r->single_high);
  const double oracle_gap =
      std::max(std::abs(r->oracle_single_epsilon - r->closed_single_epsilon),
               std::abs(r->oracle_diagonal_epsilon - r->closed_diagonal_epsilon));
  Report(1, "counterexample constants",
         constants && exceeds && oracle_gap <= 1e-6 && elapsed < 1.0,
         absl::StrFormat("%.4f %.4f %.4f %.4f, %.4f > %.4f, oracle gap %.1e, %.3fs",
                         r->single_low, r->single_high, r->joint_low, r->joint_high,
                         std::max(r->joint_low, r->joint_high),
                         std::max(r->single_low, r->single_high), oracle_gap, elapsed));
}

// Shared by criteria 2 and 3.
std::vector<ChainModel> SoundnessChains() {
  Rng rng(2002);
  std::vector<ChainModel> chains;
  for (int n = 0; n < 100; ++n) chains.push_back(RandomErgodicModel(2, rng));
  return chains;
}

void MechanismSoundness(const std::vector<ChainModel>& chains) {
  const auto start = Clock::now();
  const int horizon = 4;
  const std::vector<int> nodes = AllNodes(horizon);
  double worst_excess = -InfluenceValue::kInfinity;
  std::string error;
  int releases = 0;
  for (const ChainModel& model : chains) {
    const std::vector<ChainModel> models = {model};
    const Framework framework{horizon, Window{1, horizon}, models, {}};
    for (double epsilon : {0.5, 1.0}) {
      absl::StatusOr<NoiseCalibration> calibration =
          CalibrateNoise(framework, epsilon, MechanismVariant::kExact);
      if (!calibration.ok()) {
        error = calibration.status().ToString();
        continue;
      }
      for (int state = 0; state < 2; ++state) {
        const OracleRelease release = WindowedRelease(
            *CountStateQuery(state, 2), framework.window, calibration->sigma_max);
        absl::StatusOr<EmpiricalEpsilon> eps =
            EmpiricalPufferfishEpsilon(models, horizon, {&release, 1}, nodes);
        if (!eps.ok()) {
          error = eps.status().ToString();
          continue;
        }
        worst_excess = std::max(worst_excess, eps->value - epsilon);
        ++releases;
      }
    }
  }
  const double elapsed = Seconds(start);
  Report(2, "mechanism soundness",
         error.empty() && worst_excess <= 1e-6 && elapsed < 60.0,
         error.empty()
             ? absl::StrFormat("%d releases, max(empirical - epsilon) = %.3e, %.2fs",
                               releases, worst_excess, elapsed)
             : error);
}

void SequentialComposition(const std::vector<ChainModel>& chains) {
  const auto start = Clock::now();
  const int horizon = 4;
  const std::vector<int> nodes = AllNodes(horizon);
  double worst = 0.0, worst_reported = 0.0;
  int differing = 0;
  std::string error;
  for (int n = 0; n < 25; ++n) {
    const std::vector<ChainModel> models = {chains[n]};
    const Framework framework{horizon, Window{1, horizon}, models, {}};
    std::vector<ReleaseRecord> records;
    for (int state = 0; state < 2; ++state) {
      const double epsilon = state == 0 ? 0.4 : 0.8;
      absl::StatusOr<ReleaseRecord> record =
          Release(StateSequence{{0, 1, 1, 0}}, *CountStateQuery(state, 2), epsilon,
                  framework, MechanismVariant::kExact, 100 + n);
      if (!record.ok()) {
        error = record.status().ToString();
        break;
      }
      record->id = state + 1;
      records.push_back(*record);
    }
    if (!error.empty()) break;
    absl::StatusOr<CompositionReport> report = ComposeSequentialMqm(records);
    if (!report.ok()) {
      error = report.status().ToString();
      break;
    }
    if (!SameQuiltShapes(records[0], records[1])) ++differing;
    std::vector<OracleRelease> releases;
    for (int state = 0; state < 2; ++state) {
      releases.push_back(ReleaseFromRecord(records[state], *CountStateQuery(state, 2)));
    }
    absl::StatusOr<EmpiricalEpsilon> eps =
        EmpiricalPufferfishEpsilon(models, horizon, releases, nodes);
    if (!eps.ok()) {
      error = eps.status().ToString();
      break;
    }
    worst = std::max(worst, eps->value);
    worst_reported = std::max(worst_reported, report->epsilon);
  }
  const double elapsed = Seconds(start);
  Report(3, "sequential composition",
         error.empty() && worst <= 1.2 + 1e-6 && worst_reported <= 1.2 + 1e-12 &&
             differing > 0 && elapsed < 120.0,
         error.empty() ? absl::StrFormat("max joint epsilon %.6f <= 1.2, %d/25 with "
                                         "differing active quilts, %.2fs",
                                         worst, differing, elapsed)
                       : error);
}

void ParallelComposition() {
  const auto start = Clock::now();
  Rng rng(2004);
  const int horizon = 6;
  const Window wa{1, 2}, wb{5, 6};
  const std::vector<int> secret_nodes = {1, 2, 5, 6};
  double worst_excess = -InfluenceValue::kInfinity;
  double min_over_max = InfluenceValue::kInfinity;
  std::string error;
  for (int n = 0; n < 25 && error.empty(); ++n) {
    const std::vector<ChainModel> models = {RandomErgodicModel(2, rng)};
    const double eps_a = 0.2 + 2 * UniformOpen01(rng);
    const double eps_b = 0.2 + 2 * UniformOpen01(rng);
    absl::StatusOr<ReleaseRecord> a =
        Release(StateSequence{{0, 1}}, *CountStateQuery(0, 2), eps_a,
                Framework{horizon, wa, models, {}}, MechanismVariant::kExact, n);
    absl::StatusOr<ReleaseRecord> b =
        Release(StateSequence{{1, 1}}, *CountStateQuery(1, 2), eps_b,
                Framework{horizon, wb, models, {}}, MechanismVariant::kExact, n);
    if (!a.ok() || !b.ok()) {
      error = (a.ok() ? b.status() : a.status()).ToString();
      break;
    }
    a->id = 1;
    b->id = 2;
    absl::StatusOr<CompositionReport> report = ComposeParallelGeneral(*a, *b);
    if (!report.ok()) {
      error = report.status().ToString();
      break;
    }
    const std::vector<OracleRelease> releases = {
        ReleaseFromRecord(*a, *CountStateQuery(0, 2)),
        ReleaseFromRecord(*b, *CountStateQuery(1, 2))};
    absl::StatusOr<EmpiricalEpsilon> eps =
        EmpiricalPufferfishEpsilon(models, horizon, releases, secret_nodes);
    if (!eps.ok()) {
      error = eps.status().ToString();
      break;
    }
    worst_excess = std::max(worst_excess, eps->value - report->epsilon);
    min_over_max = std::min(min_over_max, report->epsilon - std::max(eps_a, eps_b));
  }
  const double elapsed = Seconds(start);
  Report(4, "parallel composition",
         error.empty() && worst_excess <= 1e-6 && min_over_max >= 0.0 && elapsed < 120.0,
         error.empty() ? absl::StrFormat("max(joint - bound) = %.3e, "
                                         "min(bound - max input) = %.3e, %.2fs",
                                         worst_excess, min_over_max, elapsed)
                       : error);
}

void SpectralDominance() {
  Rng rng(2005);
  double worst = -InfluenceValue::kInfinity;
  int checked = 0, degenerate = 0;
  std::string error;
  while (checked < 100) {
    const ChainModel model = RandomErgodicModel(UniformInt(rng, 2, 4), rng);
    absl::StatusOr<SpectralInfo> info = Spectral(model);
    if (!info.ok()) {
      ++degenerate;
      continue;
    }
    const int start =
        std::max(1, static_cast<int>(std::ceil(ApproxOffsetThreshold(*info))));
    const int a = start + UniformInt(rng, 0, 3);
    const int b = start + UniformInt(rng, 0, 3);
    const QuiltShape shape{a + 1 + UniformInt(rng, 0, 3), a, b};
    absl::StatusOr<InfluenceValue> exact = ExactMaxInfluence(model, shape);
    if (!exact.ok()) {
      error = exact.status().ToString();
      break;
    }
    worst = std::max(worst, exact->value - ApproxMaxInfluence(*info, shape).value);
    ++checked;
  }
  Report(5, "spectral bound dominance", error.empty() && worst <= 1e-9,
         error.empty() ? absl::StrFormat("%d chains, max(exact - bound) = %.3e "
                                         "(%d spectra rejected)",
                                         checked, worst, degenerate)
                       : error);
}

void Monotonicity() {
  Rng rng(2006);
  double worst = -InfluenceValue::kInfinity;
  std::string error;
  for (int n = 0; n < 200; ++n) {
    const int k = UniformInt(rng, 2, 3);
    const int horizon = UniformInt(rng, 2, 5);
    const ChainModel model = n % 2 == 0 ? RandomPositiveModel(k, rng)
                                        : RandomErgodicModel(k, rng);
    const int node = UniformInt(rng, 1, horizon);
    std::vector<int> r_nodes, s_nodes;
    for (int t = 1; t <= horizon; ++t) {
      if (t != node && UniformOpen01(rng) < 0.6) r_nodes.push_back(t);
    }
    for (int t : r_nodes) {
      if (UniformOpen01(rng) < 0.5) s_nodes.push_back(t);
    }
    absl::StatusOr<InfluenceValue> s = BruteForceInfluence(model, horizon, node, s_nodes);
    absl::StatusOr<InfluenceValue> r = BruteForceInfluence(model, horizon, node, r_nodes);
    if (!s.ok() || !r.ok()) {
      error = (s.ok() ? r.status() : s.status()).ToString();
      break;
    }
    if (s->value == r->value) {
      worst = std::max(worst, 0.0);
    } else {
      worst = std::max(worst, s->value - r->value);
    }
  }
  Report(6, "influence monotonicity", error.empty() && worst <= 1e-9,
         error.empty() ? absl::StrFormat("200 instances, max(e_S - e_R) = %.3e", worst)
                       : error);
}

void SpectralAnalytics() {
  absl::StatusOr<ChainModel> model =
      ChainModel::FromProbabilities({0.5, 0.5}, {{0.75, 0.25}, {0.25, 0.75}});
  absl::StatusOr<SpectralInfo> info =
      model.ok() ? Spectral(*model) : absl::StatusOr<SpectralInfo>(model.status());
  if (!info.ok()) {
    Report(7, "spectral analytics", false, info.status().ToString());
    return;
  }
  const bool passed = std::abs(info->gap - 0.75) <= 1e-9 &&
                      std::abs(info->stationary[0] - 0.5) <= 1e-10 &&
                      std::abs(info->stationary[1] - 0.5) <= 1e-10;
  Report(7, "spectral analytics", passed,
         absl::StrFormat("g = %.12f, pi = [%.12f, %.12f]", info->gap, info->stationary[0],
                         info->stationary[1]));
}

void QuiltEnumeration() {
  bool counts = true, empty_present = true;
  for (int horizon = 1; horizon <= 20; ++horizon) {
    for (int i = 1; i <= horizon; ++i) {
      const std::int64_t expected =
          static_cast<std::int64_t>(i - 1) * (horizon - i) + (i - 1) + (horizon - i) + 1;
      const std::vector<QuiltShape> shapes = EnumerateQuilts(horizon, i);
      counts = counts && static_cast<std::int64_t>(shapes.size()) == expected &&
               QuiltCount(horizon, i) == expected;
      empty_present =
          empty_present && std::any_of(shapes.begin(), shapes.end(), [](const QuiltShape& q) {
            return q.kind() == QuiltKind::kEmpty;
          });
    }
  }
  Rng rng(2008);
  double worst = 0.0;
  std::string error;
  for (int n = 0; n < 50; ++n) {
    const int k = UniformInt(rng, 2, 4);
    std::vector<double> row(k);
    double total = 0.0;
    for (double& x : row) total += (x = -std::log(UniformOpen01(rng)));
    for (double& x : row) x /= total;
    absl::StatusOr<ChainModel> model =
        ChainModel::FromProbabilities(row, std::vector<std::vector<double>>(k, row));
    const double epsilon = 0.05 + 3 * UniformOpen01(rng);
    const int horizon = UniformInt(rng, 1, 12);
    const int start = UniformInt(rng, 1, horizon);
    const Framework framework{horizon, Window{start, UniformInt(rng, start, horizon)},
                              {*model}, {}};
    absl::StatusOr<NoiseCalibration> calibration =
        CalibrateNoise(framework, epsilon, MechanismVariant::kExact);
    if (!calibration.ok()) {
      error = calibration.status().ToString();
      break;
    }
    worst = std::max(worst, std::abs(calibration->sigma_max - 1.0 / epsilon));
  }
  Report(8, "quilt enumeration", counts && empty_present && error.empty() && worst <= 1e-12,
         error.empty() ? absl::StrFormat("counts %s for T <= 20, empty quilt %s, "
                                         "max |sigma - 1/epsilon| = %.1e",
                                         counts ? "match" : "differ",
                                         empty_present ? "present" : "missing", worst)
                       : error);
}

void AccountantOrderings() {
  Rng rng(2009);
  std::string error;
  // Sum versus K * max on records whose active quilts coincide.
  int fixed_pairs = 0, attempts = 0;
  double worst_fixed = -InfluenceValue::kInfinity;
  while (fixed_pairs < 50 && attempts < 100000 && error.empty()) {
    ++attempts;
    const int horizon = UniformInt(rng, 2, 6);
    const std::vector<ChainModel> models = {RandomPositiveModel(UniformInt(rng, 2, 3), rng)};
    const Framework framework{horizon, Window{1, horizon}, models, {}};
    std::vector<ReleaseRecord> records;
    for (int j = 0; j < 2; ++j) {
      absl::StatusOr<ReleaseRecord> record =
          Release(StateSequence{std::vector<int>(horizon, 0)}, *CountStateQuery(j, 2),
                  0.2 + 3 * UniformOpen01(rng), framework, MechanismVariant::kExact,
                  attempts);
      if (!record.ok()) {
        error = record.status().ToString();
        break;
      }
      record->id = j + 1;
      records.push_back(*record);
    }
    if (!error.empty() || !SameQuiltShapes(records[0], records[1])) continue;
    absl::StatusOr<CompositionReport> thm6 = ComposeSequentialMqm(records);
    absl::StatusOr<CompositionReport> thm1 = ComposeSequentialFixedQuilts(records);
    if (!thm6.ok() || !thm1.ok()) {
      error = (thm6.ok() ? thm1.status() : thm6.status()).ToString();
      break;
    }
    worst_fixed = std::max(worst_fixed, thm6->epsilon - thm1->epsilon);
    ++fixed_pairs;
  }

  // Far-apart approximate releases versus the general disjoint-window bound.
  int far_pairs = 0;
  attempts = 0;
  double worst_far = -InfluenceValue::kInfinity;
  while (far_pairs < 50 && attempts < 10000 && error.empty()) {
    ++attempts;
    const ChainModel model = RandomPositiveModel(2, rng);
    const std::vector<ChainModel> models = {model};
    const int length = UniformInt(rng, 20, 40);
    const int separation = length - 1 + UniformInt(rng, 0, 10);
    const Window wa{1, length};
    const Window wb{length + separation, 2 * length + separation - 1};
    const int horizon = wb.end + UniformInt(rng, 0, 5);
    std::vector<ReleaseRecord> records;
    for (const Window& w : {wa, wb}) {
      absl::StatusOr<ReleaseRecord> record =
          Release(StateSequence{std::vector<int>(w.length(), 1)}, *CountStateQuery(0, 2),
                  0.5 + 2.5 * UniformOpen01(rng), Framework{horizon, w, models, {}},
                  MechanismVariant::kApprox, attempts);
      if (!record.ok()) break;  // Spectrum unusable for the approximate variant.
      record->id = static_cast<std::int64_t>(records.size() + 1);
      records.push_back(*record);
    }
    if (records.size() != 2) continue;
    absl::StatusOr<CompositionReport> thm3 = ComposeParallelMqmApprox(records[0], records[1]);
    if (!thm3.ok()) {
      error = thm3.status().ToString();
      break;
    }
    if (thm3->rule != CompositionRule::kParallelMqmApprox) continue;
    absl::StatusOr<CompositionReport> thm2 = ComposeParallelGeneral(records[0], records[1]);
    if (!thm2.ok()) {
      error = thm2.status().ToString();
      break;
    }
    worst_far = std::max(worst_far, thm3->epsilon - thm2->epsilon);
    ++far_pairs;
  }
  Report(9, "accountant orderings",
         error.empty() && fixed_pairs == 50 && far_pairs == 50 && worst_fixed <= 0.0 &&
             worst_far <= 0.0,
         error.empty() ? absl::StrFormat("%d pairs: max(sum - K max) = %.3e; %d pairs: "
                                         "max(far-apart - general) = %.3e",
                                         fixed_pairs, worst_fixed, far_pairs, worst_far)
                       : error);
}

}  // namespace
}  // namespace quiltguard

int main() {
  using namespace quiltguard;
  CounterexampleGolden();
  const std::vector<ChainModel> chains = SoundnessChains();
  MechanismSoundness(chains);
  SequentialComposition(chains);
  ParallelComposition();
  SpectralDominance();
  Monotonicity();
  SpectralAnalytics();
  QuiltEnumeration();
  AccountantOrderings();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
