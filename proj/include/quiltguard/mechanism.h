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

#ifndef QUILTGUARD_MECHANISM_H_
#define QUILTGUARD_MECHANISM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "quiltguard/chain.h"
#include "quiltguard/influence.h"
#include "quiltguard/random.h"

namespace quiltguard {

// The Pufferfish setting for one release: a chain of length `horizon`, the
// window of nodes the release reads (its secrets are "X_i = a" for i in the
// window), and the belief set of chain models.
struct Framework {
  int horizon = 1;
  Window window;
  std::vector<ChainModel> models;
  // Parallel to `models`; empty names are filled with "theta<index>".
  std::vector<std::string> model_names;

  std::string ModelName(std::size_t index) const;
};

absl::Status ValidateFramework(const Framework& framework);

// Same horizon, window and (element-wise equal) belief set.
bool SameFramework(const Framework& a, const Framework& b);

// A scalar query over the window's states. `lipschitz_constant` bounds the
// change caused by altering one state; releases divide by it so the noised
// query is 1-Lipschitz.
struct LipschitzQuery {
  std::string id;
  std::function<double(std::span<const int>)> evaluate;
  double lipschitz_constant = 1.0;
};

// Number of positions equal to `state`; identifier "count:<state>".
absl::StatusOr<LipschitzQuery> CountStateQuery(int state, int num_states);

// Randomized single-coordinate flips; fails if some flip moves the query by
// more than its Lipschitz constant.
absl::Status SpotCheckLipschitz(const LipschitzQuery& query, int num_states,
                                int length, std::uint64_t seed, int trials);

enum class MechanismVariant { kExact, kApprox };

enum class NodeScope {
  // Only nodes of the release window are protected and quilts stay inside it.
  kWindow,
  // Every node of the chain, with quilts over the whole chain. Never less
  // noise than kWindow.
  kWholeChain,
};

struct MechanismOptions {
  NodeScope scope = NodeScope::kWindow;
  // Approx variant only: treat one-sided quilts as unusable.
  bool approx_two_sided_only = false;
  // Windows longer than this restrict two-sided quilts to offsets
  // <= max_two_sided_offset. The empty quilt always stays available.
  int search_restriction_threshold = 512;
  int max_two_sided_offset = 64;

  friend bool operator==(const MechanismOptions&, const MechanismOptions&) = default;
};

// All minimal quilts of `node` inside `window`: every two-sided (a, b), every
// left-only a, every right-only b, and the empty quilt. When
// `max_two_sided_offset` is set, two-sided quilts are limited to a, b <= it.
std::vector<QuiltShape> EnumerateQuilts(
    Window window, int node, std::optional<int> max_two_sided_offset = {});
inline std::vector<QuiltShape> EnumerateQuilts(int horizon, int node) {
  return EnumerateQuilts(Window{1, horizon}, node);
}

// Number of shapes EnumerateQuilts returns without a restriction.
std::int64_t QuiltCount(int length, int position);

// Laplace scale the quilt would need: |X_N| / (epsilon - e), or +infinity
// when e >= epsilon.
double Score(const QuiltShape& shape, InfluenceValue influence, double epsilon,
             Window window);

// Lower-is-better ordering for picking the active quilt: score, then nearby
// size, then two-sided before one-sided before empty, then smallest (a, b).
bool PreferQuilt(const QuiltShape& a, double score_a, const QuiltShape& b,
                 double score_b, Window window);

struct ActiveQuilt {
  QuiltShape shape;
  double score = 0.0;
  int nearby = 0;
  double influence = 0.0;

  friend bool operator==(const ActiveQuilt&, const ActiveQuilt&) = default;
};

// Active quilts of every protected node under one belief.
struct ModelQuilts {
  std::string model_name;
  double sigma_max = 0.0;
  std::vector<ActiveQuilt> nodes;

  friend bool operator==(const ModelQuilts&, const ModelQuilts&) = default;
};

struct NoiseCalibration {
  double sigma_max = 0.0;
  std::vector<ModelQuilts> per_model;
};

// The quilt search: for every belief, every protected node and every minimal
// quilt, score it, keep the best quilt per node and the worst node per
// belief. sigma_max is the max over beliefs.
absl::StatusOr<NoiseCalibration> CalibrateNoise(const Framework& framework,
                                                double epsilon,
                                                MechanismVariant variant,
                                                const MechanismOptions& options = {});

// Everything one mechanism invocation decided. `output` is in the scaled
// (1-Lipschitz) units; multiply by `lipschitz_scale` for query units.
struct ReleaseRecord {
  std::int64_t id = 0;
  MechanismVariant variant = MechanismVariant::kExact;
  double epsilon = 0.0;
  double sigma_max = 0.0;
  double output = 0.0;
  double lipschitz_scale = 1.0;
  std::string query_id;
  std::uint64_t seed = 0;
  Framework framework;
  MechanismOptions options;
  std::vector<ModelQuilts> active_quilts;
};

// Releases query(data) / lipschitz + sigma_max * Z with Z ~ Lap(1) drawn from
// a generator seeded with `seed`. `data` holds the states of the window.
absl::StatusOr<ReleaseRecord> Release(const StateSequence& data,
                                      const LipschitzQuery& query,
                                      double epsilon, const Framework& framework,
                                      MechanismVariant variant,
                                      std::uint64_t seed,
                                      const MechanismOptions& options = {});

// The unit-scale Laplace draw a release with this seed adds.
double LaplaceDraw(std::uint64_t seed);

}  // namespace quiltguard

#endif  // QUILTGUARD_MECHANISM_H_
