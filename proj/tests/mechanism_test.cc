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

#include <cmath>
#include <set>

#include "gtest/gtest.h"
#include "test_util.h"

namespace quiltguard {
namespace {

using testing::IndependentModel;
using testing::SymmetricTwoState;
using testing::UniformInt;

Framework WholeChain(int horizon, std::vector<ChainModel> models) {
  return Framework{horizon, Window{1, horizon}, std::move(models), {}};
}

TEST(EnumerateQuiltsTest, CountsMatchClosedForm) {
  for (int length = 1; length <= 20; ++length) {
    for (int node = 1; node <= length; ++node) {
      const std::vector<QuiltShape> shapes = EnumerateQuilts(length, node);
      ASSERT_EQ(static_cast<std::int64_t>(shapes.size()), QuiltCount(length, node));
      EXPECT_EQ(QuiltCount(length, node),
                (node - 1) * (length - node) + (node - 1) + (length - node) + 1);
      EXPECT_EQ(shapes.back(), (QuiltShape{node, {}, {}}));
      std::set<std::pair<int, int>> distinct;
      for (const QuiltShape& s : shapes) {
        EXPECT_TRUE(ValidateShape(s, Window{1, length}).ok()) << s.DebugString();
        distinct.insert({s.left.value_or(0), s.right.value_or(0)});
      }
      EXPECT_EQ(distinct.size(), shapes.size());
    }
  }
}

TEST(EnumerateQuiltsTest, RestrictedTwoSidedSearchKeepsEverythingElse) {
  const std::vector<QuiltShape> shapes = EnumerateQuilts(Window{1, 30}, 15, 3);
  int two_sided = 0, one_sided = 0, empty = 0;
  for (const QuiltShape& s : shapes) {
    switch (s.kind()) {
      case QuiltKind::kTwoSided:
        ++two_sided;
        EXPECT_LE(*s.left, 3);
        EXPECT_LE(*s.right, 3);
        break;
      case QuiltKind::kEmpty:
        ++empty;
        break;
      default:
        ++one_sided;
    }
  }
  EXPECT_EQ(two_sided, 9);
  EXPECT_EQ(one_sided, 14 + 15);
  EXPECT_EQ(empty, 1);
}

TEST(ScoreTest, Examples) {
  const Window w{1, 10};
  EXPECT_DOUBLE_EQ(Score(QuiltShape{5, 2, 3}, {0.5, InfluenceMethod::kExact}, 1.0, w), 8.0);
  EXPECT_DOUBLE_EQ(Score(QuiltShape{5, {}, {}}, {0.0, InfluenceMethod::kExact}, 2.0, w), 5.0);
  EXPECT_EQ(Score(QuiltShape{5, 2, 3}, {1.0, InfluenceMethod::kExact}, 1.0, w),
            InfluenceValue::kInfinity);
  EXPECT_EQ(Score(QuiltShape{5, 2, 3}, {InfluenceValue::kInfinity, InfluenceMethod::kExact},
                  1.0, w),
            InfluenceValue::kInfinity);
}

TEST(PreferQuiltTest, TieBreakOrder) {
  const Window w{1, 10};
  // Lower score wins outright.
  EXPECT_TRUE(PreferQuilt(QuiltShape{5, {}, {}}, 1.0, QuiltShape{5, 1, 1}, 2.0, w));
  // Equal score: smaller nearby block.
  EXPECT_TRUE(PreferQuilt(QuiltShape{5, 1, 1}, 3.0, QuiltShape{5, 1, 2}, 3.0, w));
  // Equal score and block: two-sided, then one-sided, then empty.
  EXPECT_TRUE(PreferQuilt(QuiltShape{5, 2, 4}, 3.0, QuiltShape{5, {}, 1}, 3.0, w));
  EXPECT_TRUE(PreferQuilt(QuiltShape{3, {}, 3}, 3.0, QuiltShape{3, {}, {}}, 3.0,
                          Window{1, 5}));
  // Then the smaller offsets.
  EXPECT_TRUE(PreferQuilt(QuiltShape{5, 1, 3}, 3.0, QuiltShape{5, 2, 2}, 3.0, w));
  EXPECT_FALSE(PreferQuilt(QuiltShape{5, 2, 2}, 3.0, QuiltShape{5, 1, 3}, 3.0, w));
}

TEST(CountQueryTest, Examples) {
  ASSERT_OK_AND_ASSIGN(query, CountStateQuery(0, 2));
  EXPECT_EQ(query.id, "count:0");
  EXPECT_EQ(query.evaluate(std::vector<int>{0, 1, 0, 1}), 2.0);
  EXPECT_EQ(query.evaluate(std::vector<int>(7, 0)), 7.0);
  EXPECT_EQ(query.lipschitz_constant, 1.0);
  EXPECT_TRUE(SpotCheckLipschitz(query, 2, 6, 1, 500).ok());
  EXPECT_ERROR_KIND(CountStateQuery(2, 2), ErrorKind::kBadState);

  LipschitzQuery doubled = query;
  doubled.evaluate = [](std::span<const int> x) {
    return 2.0 * std::count(x.begin(), x.end(), 0);
  };
  EXPECT_FALSE(SpotCheckLipschitz(doubled, 2, 6, 1, 500).ok());
}

TEST(CalibrateTest, IndependentChainNeedsUnitSensitivityNoise) {
  for (double epsilon : {0.1, 0.5, 1.0, 3.0}) {
    for (int horizon : {1, 2, 5, 9}) {
      ASSERT_OK_AND_ASSIGN(
          cal, CalibrateNoise(WholeChain(horizon, {IndependentModel({0.3, 0.7})}),
                              epsilon, MechanismVariant::kExact));
      EXPECT_NEAR(cal.sigma_max, 1.0 / epsilon, 1e-12);
    }
  }
}

TEST(CalibrateTest, RejectsBadInputs) {
  const Framework framework = WholeChain(3, {SymmetricTwoState(0.75)});
  EXPECT_ERROR_KIND(CalibrateNoise(framework, 0.0, MechanismVariant::kExact),
                    ErrorKind::kInvalidEpsilon);
  EXPECT_ERROR_KIND(CalibrateNoise(framework, -1.0, MechanismVariant::kExact),
                    ErrorKind::kInvalidEpsilon);
  EXPECT_ERROR_KIND(CalibrateNoise(WholeChain(3, {}), 1.0, MechanismVariant::kExact),
                    ErrorKind::kEmptyThetaSet);
  Framework bad_window = framework;
  bad_window.window = Window{2, 4};
  EXPECT_ERROR_KIND(CalibrateNoise(bad_window, 1.0, MechanismVariant::kExact),
                    ErrorKind::kInvalidFramework);
  const Framework periodic =
      WholeChain(3, {*ChainModel::FromProbabilities({0.5, 0.5}, {{0, 1}, {1, 0}})});
  EXPECT_ERROR_KIND(CalibrateNoise(periodic, 1.0, MechanismVariant::kApprox),
                    ErrorKind::kNotAperiodic);
  EXPECT_TRUE(CalibrateNoise(periodic, 1.0, MechanismVariant::kExact).ok());
}

TEST(CalibrateTest, StickyChainSmallExample) {
  // T = 2, P = [[.75,.25],[.25,.75]], q uniform, epsilon = 2. Node 1: the
  // right quilt {X_2} has influence log 3 and block size 1, score
  // 1 / (2 - log 3) = 1.1016...; the empty quilt scores 2 / 2 = 1. Node 2 is
  // symmetric. So sigma_max = 1 with empty active quilts.
  ASSERT_OK_AND_ASSIGN(cal, CalibrateNoise(WholeChain(2, {SymmetricTwoState(0.75)}), 2.0,
                                           MechanismVariant::kExact));
  EXPECT_DOUBLE_EQ(cal.sigma_max, 1.0);
  ASSERT_EQ(cal.per_model.size(), 1u);
  ASSERT_EQ(cal.per_model[0].nodes.size(), 2u);
  EXPECT_EQ(cal.per_model[0].nodes[0].shape, (QuiltShape{1, {}, {}}));
  EXPECT_EQ(cal.per_model[0].model_name, "theta0");

  // With epsilon = 4 the one-node quilt wins: 1 / (4 - log 3) < 2 / 4.
  ASSERT_OK_AND_ASSIGN(cal4, CalibrateNoise(WholeChain(2, {SymmetricTwoState(0.75)}), 4.0,
                                            MechanismVariant::kExact));
  EXPECT_NEAR(cal4.sigma_max, 1.0 / (4.0 - std::log(3.0)), 1e-12);
  EXPECT_EQ(cal4.per_model[0].nodes[0].shape, (QuiltShape{1, {}, 1}));
}

TEST(CalibrateTest, MonotoneInEpsilonAndApproxDominatesExact) {
  Rng rng(23);
  for (int n = 0; n < 40; ++n) {
    const int horizon = UniformInt(rng, 2, 9);
    const Framework framework =
        WholeChain(horizon, {RandomPositiveModel(UniformInt(rng, 2, 3), rng)});
    double previous = InfluenceValue::kInfinity;
    for (double epsilon = 0.1; epsilon <= 5.0; epsilon += 0.35) {
      ASSERT_OK_AND_ASSIGN(exact, CalibrateNoise(framework, epsilon, MechanismVariant::kExact));
      ASSERT_OK_AND_ASSIGN(approx, CalibrateNoise(framework, epsilon, MechanismVariant::kApprox));
      EXPECT_LE(exact.sigma_max, previous * (1 + 1e-12));
      EXPECT_GE(approx.sigma_max, exact.sigma_max * (1 - 1e-12));
      previous = exact.sigma_max;
    }
  }
}

TEST(CalibrateTest, WholeChainScopeIsNeverQuieter) {
  Rng rng(29);
  for (int n = 0; n < 30; ++n) {
    const int horizon = UniformInt(rng, 3, 10);
    const int start = UniformInt(rng, 1, horizon);
    const int end = UniformInt(rng, start, horizon);
    Framework framework{horizon, Window{start, end}, {RandomPositiveModel(2, rng)}, {}};
    MechanismOptions whole;
    whole.scope = NodeScope::kWholeChain;
    ASSERT_OK_AND_ASSIGN(windowed, CalibrateNoise(framework, 1.0, MechanismVariant::kExact));
    ASSERT_OK_AND_ASSIGN(full, CalibrateNoise(framework, 1.0, MechanismVariant::kExact, whole));
    EXPECT_GE(full.sigma_max, windowed.sigma_max * (1 - 1e-12));
    EXPECT_EQ(static_cast<int>(windowed.per_model[0].nodes.size()), end - start + 1);
    EXPECT_EQ(static_cast<int>(full.per_model[0].nodes.size()), horizon);
  }
}

TEST(CalibrateTest, RestrictedSearchNeverLowersNoise) {
  Rng rng(31);
  for (int n = 0; n < 20; ++n) {
    const Framework framework = WholeChain(12, {RandomPositiveModel(2, rng)});
    MechanismOptions restricted;
    restricted.search_restriction_threshold = 4;
    restricted.max_two_sided_offset = 1;
    ASSERT_OK_AND_ASSIGN(full, CalibrateNoise(framework, 1.5, MechanismVariant::kExact));
    ASSERT_OK_AND_ASSIGN(limited,
                         CalibrateNoise(framework, 1.5, MechanismVariant::kExact, restricted));
    EXPECT_GE(limited.sigma_max, full.sigma_max);
  }
}

TEST(CalibrateTest, TwoSidedOnlyApproxIgnoresOneSidedQuilts) {
  const Framework framework = WholeChain(30, {SymmetricTwoState(0.75)});
  MechanismOptions two_sided;
  two_sided.approx_two_sided_only = true;
  ASSERT_OK_AND_ASSIGN(cal, CalibrateNoise(framework, 3.0, MechanismVariant::kApprox, two_sided));
  for (const ActiveQuilt& q : cal.per_model[0].nodes) {
    EXPECT_TRUE(q.shape.kind() == QuiltKind::kTwoSided || q.shape.kind() == QuiltKind::kEmpty)
        << q.shape.DebugString();
  }
  ASSERT_OK_AND_ASSIGN(loose, CalibrateNoise(framework, 3.0, MechanismVariant::kApprox));
  EXPECT_GE(cal.sigma_max, loose.sigma_max);
}

TEST(CalibrateTest, BeliefSetTakesTheWorstModel) {
  const ChainModel sticky = SymmetricTwoState(0.9);
  const ChainModel loose = SymmetricTwoState(0.6);
  ASSERT_OK_AND_ASSIGN(a, CalibrateNoise(WholeChain(5, {sticky}), 1.0, MechanismVariant::kExact));
  ASSERT_OK_AND_ASSIGN(b, CalibrateNoise(WholeChain(5, {loose}), 1.0, MechanismVariant::kExact));
  ASSERT_OK_AND_ASSIGN(both,
                       CalibrateNoise(WholeChain(5, {loose, sticky}), 1.0, MechanismVariant::kExact));
  EXPECT_EQ(both.sigma_max, std::max(a.sigma_max, b.sigma_max));
  EXPECT_EQ(both.per_model.size(), 2u);
}

TEST(ReleaseTest, OutputDecomposesIntoQueryPlusSeededNoise) {
  const Framework framework = WholeChain(5, {SymmetricTwoState(0.8)});
  ASSERT_OK_AND_ASSIGN(query, CountStateQuery(1, 2));
  const StateSequence data{{0, 1, 1, 0, 1}};
  ASSERT_OK_AND_ASSIGN(record, Release(data, query, 1.0, framework,
                                       MechanismVariant::kExact, 77));
  EXPECT_DOUBLE_EQ(record.output, 3.0 + record.sigma_max * LaplaceDraw(77));
  EXPECT_EQ(record.query_id, "count:1");
  EXPECT_EQ(record.seed, 77u);
  ASSERT_OK_AND_ASSIGN(again, Release(data, query, 1.0, framework,
                                      MechanismVariant::kExact, 77));
  EXPECT_EQ(again.output, record.output);
  ASSERT_OK_AND_ASSIGN(other, Release(data, query, 1.0, framework,
                                      MechanismVariant::kExact, 78));
  EXPECT_NE(other.output, record.output);
}

TEST(ReleaseTest, ScalesByLipschitzConstant) {
  const Framework framework = WholeChain(3, {IndependentModel({0.5, 0.5})});
  LipschitzQuery query{"weighted", [](std::span<const int> x) { return 2.0 * x[0]; }, 2.0};
  ASSERT_OK_AND_ASSIGN(record, Release(StateSequence{{1, 0, 0}}, query, 1.0, framework,
                                       MechanismVariant::kExact, 5));
  EXPECT_DOUBLE_EQ(record.output, 1.0 + LaplaceDraw(5));
  EXPECT_EQ(record.lipschitz_scale, 2.0);
}

TEST(ReleaseTest, DataMustMatchWindow) {
  Framework framework{6, Window{2, 4}, {SymmetricTwoState(0.8)}, {}};
  ASSERT_OK_AND_ASSIGN(query, CountStateQuery(0, 2));
  EXPECT_ERROR_KIND(Release(StateSequence{{0, 1, 0, 1, 0, 1}}, query, 1.0, framework,
                            MechanismVariant::kExact, 1),
                    ErrorKind::kLengthMismatch);
  EXPECT_ERROR_KIND(Release(StateSequence{{0, 2, 0}}, query, 1.0, framework,
                            MechanismVariant::kExact, 1),
                    ErrorKind::kBadState);
  EXPECT_TRUE(Release(StateSequence{{0, 1, 0}}, query, 1.0, framework,
                      MechanismVariant::kExact, 1)
                  .ok());
}

TEST(LaplaceTest, SampleMomentsAndSymmetry) {
  double sum = 0.0, abs_sum = 0.0;
  constexpr int kDraws = 200000;
  Rng rng(3);
  for (int i = 0; i < kDraws; ++i) {
    const double z = SampleLaplace(1.0, rng);
    sum += z;
    abs_sum += std::abs(z);
  }
  EXPECT_NEAR(sum / kDraws, 0.0, 0.01);
  EXPECT_NEAR(abs_sum / kDraws, 1.0, 0.01);
}

}  // namespace
}  // namespace quiltguard
