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

#include "quiltguard/mechanism.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "quiltguard/errors.h"

namespace quiltguard {
namespace {

int KindRank(QuiltKind kind) {
  switch (kind) {
    case QuiltKind::kTwoSided: return 0;
    case QuiltKind::kLeftOnly:
    case QuiltKind::kRightOnly: return 1;
    case QuiltKind::kEmpty: return 2;
  }
  return 2;
}

}  // namespace

std::string Framework::ModelName(std::size_t index) const {
  if (index < model_names.size() && !model_names[index].empty()) {
    return model_names[index];
  }
  return absl::StrCat("theta", index);
}

absl::Status ValidateFramework(const Framework& framework) {
  if (framework.models.empty()) {
    return DomainError(ErrorKind::kEmptyThetaSet, "framework has no chain models");
  }
  const std::size_t k = framework.models.front().num_states();
  for (const ChainModel& model : framework.models) {
    if (model.num_states() != k) {
      return DomainError(ErrorKind::kInvalidFramework,
                         "all chain models must share the state count");
    }
  }
  const Window& w = framework.window;
  if (framework.horizon < 1 || w.start < 1 || w.end < w.start ||
      w.end > framework.horizon) {
    return DomainError(
        ErrorKind::kInvalidFramework,
        absl::StrFormat("window [%d, %d] is not inside [1, %d]", w.start, w.end,
                        framework.horizon));
  }
  return absl::OkStatus();
}

bool SameFramework(const Framework& a, const Framework& b) {
  return a.horizon == b.horizon && a.window == b.window && a.models == b.models;
}

absl::StatusOr<LipschitzQuery> CountStateQuery(int state, int num_states) {
  if (state < 0 || state >= num_states) {
    return DomainError(ErrorKind::kBadState,
                       absl::StrFormat("state %d not in [0, %d)", state, num_states));
  }
  LipschitzQuery query;
  query.id = absl::StrCat("count:", state);
  query.evaluate = [state](std::span<const int> x) {
    return static_cast<double>(std::count(x.begin(), x.end(), state));
  };
  query.lipschitz_constant = 1.0;
  return query;
}

absl::Status SpotCheckLipschitz(const LipschitzQuery& query, int num_states,
                                int length, std::uint64_t seed, int trials) {
  Rng rng(seed);
  const std::vector<double> uniform(num_states, 1.0 / num_states);
  std::vector<int> x(length);
  for (int trial = 0; trial < trials; ++trial) {
    for (int& v : x) v = SampleIndex(uniform, rng);
    const double before = query.evaluate(x);
    const int position = SampleIndex(std::vector<double>(length, 1.0 / length), rng);
    std::vector<int> flipped = x;
    flipped[position] = SampleIndex(uniform, rng);
    const double after = query.evaluate(flipped);
    if (std::abs(after - before) > query.lipschitz_constant * (1.0 + 1e-12)) {
      return DomainError(
          ErrorKind::kInvalidFramework,
          absl::StrFormat("query %s moved by %g on a single flip, constant is %g",
                          query.id, std::abs(after - before),
                          query.lipschitz_constant));
    }
  }
  return absl::OkStatus();
}

std::vector<QuiltShape> EnumerateQuilts(Window window, int node,
                                        std::optional<int> max_two_sided_offset) {
  std::vector<QuiltShape> shapes;
  if (!window.Contains(node)) return shapes;
  const int max_left = node - window.start;
  const int max_right = window.end - node;
  const int two_sided_left =
      max_two_sided_offset ? std::min(max_left, *max_two_sided_offset) : max_left;
  const int two_sided_right =
      max_two_sided_offset ? std::min(max_right, *max_two_sided_offset) : max_right;
  for (int a = 1; a <= two_sided_left; ++a) {
    for (int b = 1; b <= two_sided_right; ++b) {
      shapes.push_back(QuiltShape{node, a, b});
    }
  }
  for (int a = 1; a <= max_left; ++a) shapes.push_back(QuiltShape{node, a, {}});
  for (int b = 1; b <= max_right; ++b) shapes.push_back(QuiltShape{node, {}, b});
  shapes.push_back(QuiltShape{node, {}, {}});
  return shapes;
}

std::int64_t QuiltCount(int length, int position) {
  const std::int64_t left = position - 1;
  const std::int64_t right = length - position;
  return left * right + left + right + 1;
}

double Score(const QuiltShape& shape, InfluenceValue influence, double epsilon,
             Window window) {
  if (!(influence.value < epsilon)) return InfluenceValue::kInfinity;
  return NearbySize(shape, window) / (epsilon - influence.value);
}

bool PreferQuilt(const QuiltShape& a, double score_a, const QuiltShape& b,
                 double score_b, Window window) {
  auto key = [&](const QuiltShape& s, double score) {
    return std::make_tuple(score, NearbySize(s, window), KindRank(s.kind()),
                           s.left.value_or(0), s.right.value_or(0));
  };
  return key(a, score_a) < key(b, score_b);
}

absl::StatusOr<NoiseCalibration> CalibrateNoise(const Framework& framework,
                                                double epsilon,
                                                MechanismVariant variant,
                                                const MechanismOptions& options) {
  if (absl::Status status = ValidateFramework(framework); !status.ok()) {
    return status;
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return DomainError(ErrorKind::kInvalidEpsilon,
                       absl::StrCat("epsilon must be positive and finite, got ",
                                    epsilon));
  }
  const Window quilt_window = options.scope == NodeScope::kWindow
                                  ? framework.window
                                  : Window{1, framework.horizon};
  std::optional<int> offset_limit;
  if (quilt_window.length() > options.search_restriction_threshold) {
    offset_limit = options.max_two_sided_offset;
  }

  NoiseCalibration calibration;
  for (std::size_t m = 0; m < framework.models.size(); ++m) {
    const ChainModel& model = framework.models[m];
    std::optional<ExactInfluenceTable> table;
    std::optional<SpectralInfo> spectral;
    if (variant == MechanismVariant::kExact) {
      table.emplace(model, quilt_window.end);
    } else {
      absl::StatusOr<SpectralInfo> info = Spectral(model);
      if (!info.ok()) return info.status();
      spectral = *std::move(info);
    }

    ModelQuilts quilts;
    quilts.model_name = framework.ModelName(m);
    for (int node = quilt_window.start; node <= quilt_window.end; ++node) {
      std::optional<ActiveQuilt> best;
      for (const QuiltShape& shape :
           EnumerateQuilts(quilt_window, node, offset_limit)) {
        InfluenceValue influence;
        if (table) {
          absl::StatusOr<InfluenceValue> exact = table->Evaluate(shape);
          if (!exact.ok()) return exact.status();
          influence = *exact;
        } else if (options.approx_two_sided_only &&
                   (shape.kind() == QuiltKind::kLeftOnly ||
                    shape.kind() == QuiltKind::kRightOnly)) {
          influence = {InfluenceValue::kInfinity, InfluenceMethod::kApprox};
        } else {
          influence = ApproxMaxInfluence(*spectral, shape);
        }
        const double score = Score(shape, influence, epsilon, quilt_window);
        if (!best || PreferQuilt(shape, score, best->shape, best->score,
                                 quilt_window)) {
          best = ActiveQuilt{shape, score, NearbySize(shape, quilt_window),
                             influence.value};
        }
      }
      quilts.sigma_max = std::max(quilts.sigma_max, best->score);
      quilts.nodes.push_back(*best);
    }
    calibration.sigma_max = std::max(calibration.sigma_max, quilts.sigma_max);
    calibration.per_model.push_back(std::move(quilts));
  }
  return calibration;
}

double LaplaceDraw(std::uint64_t seed) {
  Rng rng(seed);
  return SampleLaplace(1.0, rng);
}

absl::StatusOr<ReleaseRecord> Release(const StateSequence& data,
                                      const LipschitzQuery& query,
                                      double epsilon, const Framework& framework,
                                      MechanismVariant variant,
                                      std::uint64_t seed,
                                      const MechanismOptions& options) {
  if (absl::Status status = ValidateFramework(framework); !status.ok()) {
    return status;
  }
  if (data.length() != framework.window.length()) {
    return DomainError(
        ErrorKind::kLengthMismatch,
        absl::StrFormat("data has %d states, window [%d, %d] has %d",
                        data.length(), framework.window.start,
                        framework.window.end, framework.window.length()));
  }
  const int k = static_cast<int>(framework.models.front().num_states());
  for (int value : data.values) {
    if (value < 0 || value >= k) {
      return DomainError(ErrorKind::kBadState,
                         absl::StrFormat("state index %d not in [0, %d)", value, k));
    }
  }
  if (!(query.lipschitz_constant > 0.0)) {
    return DomainError(ErrorKind::kInvalidFramework,
                       "query Lipschitz constant must be positive");
  }
  absl::StatusOr<NoiseCalibration> calibration =
      CalibrateNoise(framework, epsilon, variant, options);
  if (!calibration.ok()) return calibration.status();

  ReleaseRecord record;
  record.variant = variant;
  record.epsilon = epsilon;
  record.sigma_max = calibration->sigma_max;
  record.lipschitz_scale = query.lipschitz_constant;
  record.query_id = query.id;
  record.seed = seed;
  record.framework = framework;
  record.options = options;
  record.active_quilts = std::move(calibration->per_model);
  const double scaled = query.evaluate(data.values) / query.lipschitz_constant;
  record.output = scaled + record.sigma_max * LaplaceDraw(seed);
  return record;
}

}  // namespace quiltguard
