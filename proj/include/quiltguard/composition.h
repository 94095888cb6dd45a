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

#ifndef QUILTGUARD_COMPOSITION_H_
#define QUILTGUARD_COMPOSITION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "quiltguard/influence.h"
#include "quiltguard/mechanism.h"

namespace quiltguard {

// Composition rules the accountant knows. The wire names ("thm1".."thm6")
// are part of the CLI and report formats.
enum class CompositionRule {
  // K releases sharing identical active quilts: K * max epsilon.
  kSequentialFixedQuilts,
  // Any two mechanisms on disjoint windows, corrected by boundary influence.
  kParallelGeneral,
  // Two approximate-influence quilt releases on far-apart windows.
  kParallelMqmApprox,
  // Any two mechanisms on the same data, corrected by a max-divergence bound.
  kSequentialGeneral,
  // Quilt releases on the same data: sum of epsilons.
  kSequentialMqm,
};

std::string_view RuleWireName(CompositionRule rule);
absl::StatusOr<CompositionRule> ParseRuleWireName(std::string_view name);

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::string evidence;
};

struct CompositionReport {
  double epsilon = 0.0;
  CompositionRule rule = CompositionRule::kSequentialMqm;
  std::vector<ConditionCheck> checks;
  std::vector<std::int64_t> inputs;
  std::vector<std::string> notes;
  // Set when the value comes from chaining pairwise rules beyond what any
  // proven result covers.
  bool heuristic = false;

  bool has_finite_guarantee() const;
};

// Sum of epsilons for quilt-mechanism releases over one framework. No quilt
// agreement is required.
absl::StatusOr<CompositionReport> ComposeSequentialMqm(
    std::span<const ReleaseRecord> records);

// K * max epsilon; fails with QuiltMismatch unless every release recorded the
// same active quilts.
absl::StatusOr<CompositionReport> ComposeSequentialFixedQuilts(
    std::span<const ReleaseRecord> records);

// eps_a + eps_b + 2E for arbitrary mechanisms whose joint output is within
// max-divergence E of the product of their marginals.
absl::StatusOr<CompositionReport> ComposeSequentialGeneral(double eps_a,
                                                           double eps_b,
                                                           double divergence);

// Bound for two releases on windows [T1, T2] and [T3, T4], T2 < T3:
//   max{ min{eps_a + eps_b, eps_a + forward},
//        min{eps_a + eps_b, eps_b + backward} }
// where forward is the influence of X_{T2} on X_{T3} and backward the
// influence of X_{T3} on X_{T2}.
double ParallelGeneralBound(double eps_a, double eps_b, double forward,
                            double backward);

struct BoundaryInfluence {
  double forward = 0.0;
  double backward = 0.0;
};

// Influences across the gap between two windows, sup over the belief set.
absl::StatusOr<BoundaryInfluence> ComputeBoundaryInfluence(
    std::span<const ChainModel> models, Window first, Window second,
    InfluenceMethod method);

// Disjoint-window composition for any pair of releases. The records may be
// given in either order.
absl::StatusOr<CompositionReport> ComposeParallelGeneral(
    const ReleaseRecord& a, const ReleaseRecord& b,
    InfluenceMethod method = InfluenceMethod::kExact);

// max(eps_a, eps_b) when both releases used approximate influence, every
// belief has a two-sided active quilt in each window, and the windows are at
// least as far apart as either is long. Otherwise falls back to
// ComposeParallelGeneral and records the failed condition.
absl::StatusOr<CompositionReport> ComposeParallelMqmApprox(
    const ReleaseRecord& a, const ReleaseRecord& b,
    InfluenceMethod fallback_method = InfluenceMethod::kExact);

// Picks a rule from the window layout: identical windows compose
// sequentially, disjoint windows in parallel (pairwise left to right for more
// than two, flagged heuristic). Partially overlapping windows are rejected.
absl::StatusOr<CompositionReport> ComposeAuto(
    std::span<const ReleaseRecord> records,
    InfluenceMethod method = InfluenceMethod::kExact);

}  // namespace quiltguard

#endif  // QUILTGUARD_COMPOSITION_H_
