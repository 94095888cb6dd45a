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

#include "quiltguard/composition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "quiltguard/errors.h"

namespace quiltguard {
namespace {

std::vector<std::int64_t> Ids(std::span<const ReleaseRecord> records) {
  std::vector<std::int64_t> ids;
  for (const ReleaseRecord& r : records) ids.push_back(r.id);
  return ids;
}

std::string WindowString(Window w) {
  return absl::StrFormat("[%d, %d]", w.start, w.end);
}

absl::Status CheckSameFramework(std::span<const ReleaseRecord> records) {
  if (records.empty()) {
    return DomainError(ErrorKind::kEmptyInput, "no release records supplied");
  }
  for (const ReleaseRecord& r : records) {
    if (!SameFramework(r.framework, records.front().framework)) {
      return DomainError(
          ErrorKind::kMixedFrameworks,
          absl::StrCat("record ", r.id, " was released under a different "
                       "window, horizon or belief set than record ",
                       records.front().id));
    }
  }
  return absl::OkStatus();
}

// Horizon and belief set agree; windows may differ.
absl::Status CheckSameBeliefs(const ReleaseRecord& a, const ReleaseRecord& b) {
  if (a.framework.horizon != b.framework.horizon ||
      a.framework.models != b.framework.models) {
    return DomainError(ErrorKind::kMixedFrameworks,
                       absl::StrCat("records ", a.id, " and ", b.id,
                                    " use different chains or belief sets"));
  }
  return absl::OkStatus();
}

bool HasTwoSidedActiveQuilt(const ModelQuilts& quilts) {
  return std::any_of(quilts.nodes.begin(), quilts.nodes.end(),
                     [](const ActiveQuilt& q) {
                       return q.shape.kind() == QuiltKind::kTwoSided;
                     });
}

}  // namespace

std::string_view RuleWireName(CompositionRule rule) {
  switch (rule) {
    case CompositionRule::kSequentialFixedQuilts: return "thm1";
    case CompositionRule::kParallelGeneral: return "thm2";
    case CompositionRule::kParallelMqmApprox: return "thm3";
    case CompositionRule::kSequentialGeneral: return "thm5";
    case CompositionRule::kSequentialMqm: return "thm6";
  }
  return "unknown";
}

absl::StatusOr<CompositionRule> ParseRuleWireName(std::string_view name) {
  for (CompositionRule rule :
       {CompositionRule::kSequentialFixedQuilts, CompositionRule::kParallelGeneral,
        CompositionRule::kParallelMqmApprox, CompositionRule::kSequentialGeneral,
        CompositionRule::kSequentialMqm}) {
    if (RuleWireName(rule) == name) return rule;
  }
  return DomainError(ErrorKind::kParseError,
                     absl::StrCat("unknown composition rule '", std::string(name), "'"));
}

bool CompositionReport::has_finite_guarantee() const {
  return std::isfinite(epsilon);
}

absl::StatusOr<CompositionReport> ComposeSequentialMqm(
    std::span<const ReleaseRecord> records) {
  if (absl::Status status = CheckSameFramework(records); !status.ok()) {
    return status;
  }
  CompositionReport report;
  report.rule = CompositionRule::kSequentialMqm;
  report.inputs = Ids(records);
  report.epsilon = 0.0;
  for (const ReleaseRecord& r : records) report.epsilon += r.epsilon;
  report.checks.push_back(
      {"same framework", true,
       absl::StrCat(records.size(), " releases over window ",
                    WindowString(records.front().framework.window))});
  return report;
}

absl::StatusOr<CompositionReport> ComposeSequentialFixedQuilts(
    std::span<const ReleaseRecord> records) {
  if (absl::Status status = CheckSameFramework(records); !status.ok()) {
    return status;
  }
  const ReleaseRecord& first = records.front();
  for (const ReleaseRecord& r : records) {
    bool same = r.active_quilts.size() == first.active_quilts.size();
    for (std::size_t m = 0; same && m < r.active_quilts.size(); ++m) {
      const auto& lhs = r.active_quilts[m].nodes;
      const auto& rhs = first.active_quilts[m].nodes;
      same = lhs.size() == rhs.size();
      for (std::size_t i = 0; same && i < lhs.size(); ++i) {
        same = lhs[i].shape == rhs[i].shape;
      }
    }
    if (!same) {
      return DomainError(ErrorKind::kQuiltMismatch,
                         absl::StrCat("records ", first.id, " and ", r.id,
                                      " used different active quilts"));
    }
  }
  CompositionReport report;
  report.rule = CompositionRule::kSequentialFixedQuilts;
  report.inputs = Ids(records);
  double max_epsilon = 0.0;
  for (const ReleaseRecord& r : records) max_epsilon = std::max(max_epsilon, r.epsilon);
  report.epsilon = static_cast<double>(records.size()) * max_epsilon;
  report.checks.push_back({"same framework", true, ""});
  report.checks.push_back({"same quilts", true,
                           "every node has the same active quilt in every release"});
  return report;
}

absl::StatusOr<CompositionReport> ComposeSequentialGeneral(double eps_a,
                                                           double eps_b,
                                                           double divergence) {
  if (divergence < 0.0 || std::isnan(divergence)) {
    return DomainError(ErrorKind::kNegativeE,
                       absl::StrCat("max-divergence bound must be >= 0, got ",
                                    divergence));
  }
  CompositionReport report;
  report.rule = CompositionRule::kSequentialGeneral;
  report.epsilon = eps_a + eps_b + 2.0 * divergence;
  report.checks.push_back({"max-divergence bound supplied", true,
                           absl::StrCat("E = ", divergence)});
  if (!std::isfinite(divergence)) {
    report.notes.push_back("no finite guarantee: the divergence bound is infinite");
  }
  return report;
}

double ParallelGeneralBound(double eps_a, double eps_b, double forward,
                            double backward) {
  const double both = eps_a + eps_b;
  return std::max(std::min(both, eps_a + forward),
                  std::min(both, eps_b + backward));
}

absl::StatusOr<BoundaryInfluence> ComputeBoundaryInfluence(
    std::span<const ChainModel> models, Window first, Window second,
    InfluenceMethod method) {
  if (first.end >= second.start) {
    return DomainError(
        ErrorKind::kOverlappingWindows,
        absl::StrCat("windows ", WindowString(first), " and ",
                     WindowString(second), " are not disjoint and ordered"));
  }
  const int distance = second.start - first.end;
  absl::StatusOr<InfluenceValue> forward =
      InfluenceOverSet(models, QuiltShape{first.end, {}, distance}, method);
  if (!forward.ok()) return forward.status();
  absl::StatusOr<InfluenceValue> backward =
      InfluenceOverSet(models, QuiltShape{second.start, distance, {}}, method);
  if (!backward.ok()) return backward.status();
  return BoundaryInfluence{forward->value, backward->value};
}

absl::StatusOr<CompositionReport> ComposeParallelGeneral(
    const ReleaseRecord& a, const ReleaseRecord& b, InfluenceMethod method) {
  if (absl::Status status = CheckSameBeliefs(a, b); !status.ok()) return status;
  const bool swapped = a.framework.window.start > b.framework.window.start;
  const ReleaseRecord& first = swapped ? b : a;
  const ReleaseRecord& second = swapped ? a : b;
  const Window wa = first.framework.window;
  const Window wb = second.framework.window;
  if (wa.end >= wb.start) {
    return DomainError(
        ErrorKind::kOverlappingWindows,
        absl::StrCat("windows ", WindowString(wa), " and ", WindowString(wb),
                     " overlap; compose same-window releases sequentially"));
  }
  absl::StatusOr<BoundaryInfluence> boundary =
      ComputeBoundaryInfluence(first.framework.models, wa, wb, method);
  if (!boundary.ok()) return boundary.status();

  CompositionReport report;
  report.rule = CompositionRule::kParallelGeneral;
  report.inputs = {a.id, b.id};
  report.epsilon = ParallelGeneralBound(first.epsilon, second.epsilon,
                                        boundary->forward, boundary->backward);
  report.checks.push_back(
      {"disjoint windows", true,
       absl::StrCat(WindowString(wa), " before ", WindowString(wb))});
  report.checks.push_back(
      {"boundary influence", true,
       absl::StrFormat("forward e(X_%d | X_%d) = %g, backward e(X_%d | X_%d) = %g "
                       "(%s)",
                       wb.start, wa.end, boundary->forward, wa.end, wb.start,
                       boundary->backward,
                       method == InfluenceMethod::kExact ? "exact" : "spectral bound")});
  report.notes.push_back(
      "guarantee covers secrets inside the two windows only; nodes outside "
      "both windows carry no stated guarantee");
  return report;
}

absl::StatusOr<CompositionReport> ComposeParallelMqmApprox(
    const ReleaseRecord& a, const ReleaseRecord& b,
    InfluenceMethod fallback_method) {
  if (a.variant != MechanismVariant::kApprox ||
      b.variant != MechanismVariant::kApprox) {
    return DomainError(ErrorKind::kNotApproxVariant,
                       "far-apart parallel composition needs both releases to "
                       "use the spectral influence bound");
  }
  if (absl::Status status = CheckSameBeliefs(a, b); !status.ok()) return status;
  const bool swapped = a.framework.window.start > b.framework.window.start;
  const ReleaseRecord& first = swapped ? b : a;
  const ReleaseRecord& second = swapped ? a : b;
  const Window wa = first.framework.window;
  const Window wb = second.framework.window;
  if (wa.end >= wb.start) {
    return DomainError(
        ErrorKind::kOverlappingWindows,
        absl::StrCat("windows ", WindowString(wa), " and ", WindowString(wb),
                     " overlap"));
  }

  std::vector<std::string> missing;
  for (std::size_t m = 0; m < first.active_quilts.size(); ++m) {
    if (!HasTwoSidedActiveQuilt(first.active_quilts[m])) {
      missing.push_back(absl::StrCat(first.active_quilts[m].model_name, " in ",
                                     WindowString(wa)));
    }
  }
  for (std::size_t m = 0; m < second.active_quilts.size(); ++m) {
    if (!HasTwoSidedActiveQuilt(second.active_quilts[m])) {
      missing.push_back(absl::StrCat(second.active_quilts[m].model_name, " in ",
                                     WindowString(wb)));
    }
  }
  ConditionCheck two_sided{"two-sided active quilt", missing.empty(),
                           missing.empty()
                               ? "every belief has one in both windows"
                               : absl::StrCat("missing for ",
                                              absl::StrJoin(missing, "; "))};
  const int separation = wb.start - wa.end;
  const int longest = std::max(wa.end - wa.start, wb.end - wb.start);
  ConditionCheck far_apart{
      "far apart", separation >= longest,
      absl::StrFormat("T3 - T2 = %d, max(T2 - T1, T4 - T3) = %d", separation,
                      longest)};

  if (two_sided.passed && far_apart.passed) {
    CompositionReport report;
    report.rule = CompositionRule::kParallelMqmApprox;
    report.inputs = {a.id, b.id};
    report.epsilon = std::max(a.epsilon, b.epsilon);
    report.checks = {two_sided, far_apart};
    report.notes.push_back(
        "guarantee covers secrets inside the two windows only");
    return report;
  }

  absl::StatusOr<CompositionReport> fallback =
      ComposeParallelGeneral(a, b, fallback_method);
  if (!fallback.ok()) return fallback.status();
  fallback->checks.insert(fallback->checks.begin(), {two_sided, far_apart});
  fallback->notes.push_back(
      "conditions of the far-apart rule failed; used the general disjoint-window bound");
  return fallback;
}

absl::StatusOr<CompositionReport> ComposeAuto(
    std::span<const ReleaseRecord> records, InfluenceMethod method) {
  if (records.empty()) {
    return DomainError(ErrorKind::kEmptyInput, "no release records supplied");
  }
  const Window first_window = records.front().framework.window;
  const bool all_same_window =
      std::all_of(records.begin(), records.end(), [&](const ReleaseRecord& r) {
        return r.framework.window == first_window;
      });
  if (all_same_window) return ComposeSequentialMqm(records);

  std::vector<const ReleaseRecord*> ordered;
  for (const ReleaseRecord& r : records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const ReleaseRecord* x, const ReleaseRecord* y) {
              return x->framework.window.start < y->framework.window.start;
            });
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
    const Window lhs = ordered[i]->framework.window;
    const Window rhs = ordered[i + 1]->framework.window;
    if (lhs.end >= rhs.start) {
      return DomainError(
          ErrorKind::kOverlappingWindows,
          absl::StrCat("windows ", WindowString(lhs), " and ", WindowString(rhs),
                       " partially overlap; no composition result covers "
                       "this. Compose same-window releases sequentially and "
                       "disjoint groups in parallel."));
    }
  }

  auto pair = [&](const ReleaseRecord& a, const ReleaseRecord& b) {
    if (a.variant == MechanismVariant::kApprox &&
        b.variant == MechanismVariant::kApprox) {
      return ComposeParallelMqmApprox(a, b, method);
    }
    return ComposeParallelGeneral(a, b, method);
  };
  if (ordered.size() == 2) return pair(*ordered[0], *ordered[1]);

  // More than two disjoint windows: fold left to right, treating everything
  // composed so far as one release that ends where the last window ended.
  absl::StatusOr<CompositionReport> report = pair(*ordered[0], *ordered[1]);
  if (!report.ok()) return report.status();
  for (std::size_t i = 2; i < ordered.size(); ++i) {
    const ReleaseRecord& next = *ordered[i];
    if (absl::Status status = CheckSameBeliefs(*ordered[0], next); !status.ok()) {
      return status;
    }
    absl::StatusOr<BoundaryInfluence> boundary = ComputeBoundaryInfluence(
        next.framework.models, ordered[i - 1]->framework.window,
        next.framework.window, method);
    if (!boundary.ok()) return boundary.status();
    report->epsilon = ParallelGeneralBound(report->epsilon, next.epsilon,
                                           boundary->forward, boundary->backward);
    report->rule = CompositionRule::kParallelGeneral;
    report->inputs.push_back(next.id);
  }
  report->heuristic = true;
  report->notes.push_back(
      "pairwise left-to-right extension to more than two windows; not covered "
      "by a proven composition result");
  return report;
}

}  // namespace quiltguard
