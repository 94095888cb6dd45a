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

#include <cmath>

#include "gtest/gtest.h"
#include "quiltguard/oracle.h"
#include "test_util.h"

namespace quiltguard {
namespace {

using testing::IndependentModel;
using testing::RandomSparseModel;
using testing::SymmetricTwoState;
using testing::UniformInt;

constexpr double kInf = InfluenceValue::kInfinity;

SpectralInfo HalfHalfSpectrum() {
  SpectralInfo info;
  info.stationary = {0.5, 0.5};
  info.pi_min = 0.5;
  info.gap = 0.75;
  info.eigenvalues = {1.0, 0.25};
  return info;
}

TEST(NearbySizeTest, Examples) {
  EXPECT_EQ(NearbySize(QuiltShape{5, 2, 3}, 10), 4);
  EXPECT_EQ(NearbySize(QuiltShape{5, {}, {}}, 10), 10);
  EXPECT_EQ(NearbySize(QuiltShape{5, {}, 1}, 10), 5);
  EXPECT_EQ(NearbySize(QuiltShape{5, 2, {}}, 10), 7);
  // Restricted to a window, the block is clipped to the window.
  EXPECT_EQ(NearbySize(QuiltShape{5, {}, 1}, Window{3, 8}), 3);
  EXPECT_EQ(NearbySize(QuiltShape{5, {}, {}}, Window{3, 8}), 6);
}

TEST(ValidateShapeTest, OffsetsMustStayInside) {
  EXPECT_TRUE(ValidateShape(QuiltShape{3, 2, 2}, Window{1, 5}).ok());
  EXPECT_ERROR_KIND(ValidateShape(QuiltShape{3, 3, {}}, Window{1, 5}),
                    ErrorKind::kInvalidShape);
  EXPECT_ERROR_KIND(ValidateShape(QuiltShape{3, {}, 3}, Window{1, 5}),
                    ErrorKind::kInvalidShape);
  EXPECT_ERROR_KIND(ValidateShape(QuiltShape{3, 0, {}}, Window{1, 5}),
                    ErrorKind::kInvalidShape);
  EXPECT_ERROR_KIND(ValidateShape(QuiltShape{6, {}, {}}, Window{1, 5}),
                    ErrorKind::kInvalidShape);
}

TEST(ExactInfluenceTest, Examples) {
  const ChainModel sticky = SymmetricTwoState(0.75);
  ASSERT_OK_AND_ASSIGN(empty, ExactMaxInfluence(sticky, QuiltShape{2, {}, {}}));
  EXPECT_EQ(empty.value, 0.0);

  ASSERT_OK_AND_ASSIGN(one_step, ExactMaxInfluence(sticky, QuiltShape{2, {}, 1}));
  EXPECT_NEAR(one_step.value, 1.0986122886681098, 1e-12);
  EXPECT_EQ(one_step.method, InfluenceMethod::kExact);

  const ChainModel independent = IndependentModel({0.1, 0.6, 0.3});
  for (const QuiltShape& shape :
       {QuiltShape{3, 1, 2}, QuiltShape{3, 2, {}}, QuiltShape{3, {}, 1}}) {
    ASSERT_OK_AND_ASSIGN(v, ExactMaxInfluence(independent, shape));
    EXPECT_NEAR(v.value, 0.0, 1e-12) << shape.DebugString();
  }

  const ChainModel frozen = *ChainModel::FromProbabilities({0.5, 0.5}, {{1, 0}, {0, 1}});
  ASSERT_OK_AND_ASSIGN(inf, ExactMaxInfluence(frozen, QuiltShape{1, {}, 1}));
  EXPECT_TRUE(inf.is_infinite());
}

TEST(ExactInfluenceTest, SkipsSecretsWithZeroMarginal) {
  // X_1 is always 0, so there is no secret pair at node 1.
  const ChainModel pinned = *ChainModel::FromProbabilities({1, 0}, {{0.5, 0.5}, {0.5, 0.5}});
  ASSERT_OK_AND_ASSIGN(v, ExactMaxInfluence(pinned, QuiltShape{1, {}, 1}));
  EXPECT_EQ(v.value, 0.0);
}

TEST(ExactInfluenceTest, MatchesJointEnumeration) {
  Rng rng(11);
  for (int n = 0; n < 150; ++n) {
    const int k = UniformInt(rng, 1, 3);
    const int horizon = UniformInt(rng, 2, 5);
    const ChainModel model = RandomSparseModel(k, rng, n % 3 == 0 ? 0.35 : 0.0);
    const int node = UniformInt(rng, 1, horizon);
    std::vector<std::optional<int>> lefts = {std::nullopt};
    std::vector<std::optional<int>> rights = {std::nullopt};
    for (int a = 1; a < node; ++a) lefts.push_back(a);
    for (int b = 1; node + b <= horizon; ++b) rights.push_back(b);
    for (const auto& left : lefts) {
      for (const auto& right : rights) {
        const QuiltShape shape{node, left, right};
        std::vector<int> set;
        if (left) set.push_back(node - *left);
        if (right) set.push_back(node + *right);
        ASSERT_OK_AND_ASSIGN(exact, ExactMaxInfluence(model, shape));
        ASSERT_OK_AND_ASSIGN(brute, BruteForceInfluence(model, horizon, node, set));
        EXPECT_GE(exact.value, 0.0);
        if (brute.is_infinite()) {
          EXPECT_TRUE(exact.is_infinite()) << shape.DebugString();
        } else {
          EXPECT_NEAR(exact.value, brute.value, 1e-9) << shape.DebugString();
        }
      }
    }
  }
}

TEST(ApproxInfluenceTest, Examples) {
  const SpectralInfo info = HalfHalfSpectrum();
  EXPECT_NEAR(ApproxOffsetThreshold(info), 1.8483924814931874, 1e-15);
  EXPECT_EQ(ApproxMaxInfluence(info, QuiltShape{5, {}, {}}).value, 0.0);
  const InfluenceValue two_sided = ApproxMaxInfluence(info, QuiltShape{5, 4, 4});
  EXPECT_NEAR(two_sided.value, 2.8801251909081547, 1e-12);
  EXPECT_EQ(two_sided.method, InfluenceMethod::kApprox);
  EXPECT_NEAR(ApproxMaxInfluence(info, QuiltShape{5, 4, {}}).value,
              2 * 0.9600417303027182, 1e-12);
  EXPECT_NEAR(ApproxMaxInfluence(info, QuiltShape{5, {}, 4}).value,
              0.9600417303027182, 1e-12);
  EXPECT_EQ(ApproxMaxInfluence(info, QuiltShape{5, 1, 4}).value, kInf);
  EXPECT_EQ(ApproxMaxInfluence(info, QuiltShape{5, 4, 1}).value, kInf);
}

TEST(ApproxInfluenceTest, NonincreasingInOffsets) {
  Rng rng(13);
  for (int n = 0; n < 50; ++n) {
    ASSERT_OK_AND_ASSIGN(info, Spectral(RandomPositiveModel(UniformInt(rng, 2, 4), rng)));
    const int start = static_cast<int>(std::ceil(ApproxOffsetThreshold(info)));
    double previous_a = kInf, previous_b = kInf;
    for (int x = std::max(start, 1); x < start + 10; ++x) {
      const double va = ApproxMaxInfluence(info, QuiltShape{x + 1, x, start + 1}).value;
      const double vb = ApproxMaxInfluence(info, QuiltShape{start + 2, start + 1, x}).value;
      EXPECT_LE(va, previous_a);
      EXPECT_LE(vb, previous_b);
      previous_a = va;
      previous_b = vb;
    }
  }
}

TEST(ApproxInfluenceTest, DominatesExactBeyondThreshold) {
  Rng rng(17);
  for (int n = 0; n < 100; ++n) {
    const ChainModel model = RandomPositiveModel(UniformInt(rng, 2, 4), rng);
    ASSERT_OK_AND_ASSIGN(info, Spectral(model));
    const int start = std::max(1, static_cast<int>(std::ceil(ApproxOffsetThreshold(info))));
    const int a = start + UniformInt(rng, 0, 3);
    const int b = start + UniformInt(rng, 0, 3);
    const int node = a + 1 + UniformInt(rng, 0, 3);
    for (const QuiltShape& shape :
         {QuiltShape{node, a, b}, QuiltShape{node, a, {}}, QuiltShape{node, {}, b}}) {
      ASSERT_OK_AND_ASSIGN(exact, ExactMaxInfluence(model, shape));
      EXPECT_LE(exact.value, ApproxMaxInfluence(info, shape).value + 1e-9)
          << shape.DebugString();
    }
  }
}

TEST(InfluenceOverSetTest, SupremumOverBeliefs) {
  const QuiltShape shape{2, {}, 1};
  const ChainModel sticky = SymmetricTwoState(0.75);
  const ChainModel independent = IndependentModel({0.5, 0.5});
  const ChainModel frozen = *ChainModel::FromProbabilities({0.5, 0.5}, {{1, 0}, {0, 1}});

  const std::vector<ChainModel> one = {sticky};
  ASSERT_OK_AND_ASSIGN(single, InfluenceOverSet(one, shape, InfluenceMethod::kExact));
  EXPECT_NEAR(single.value, std::log(3.0), 1e-12);

  const std::vector<ChainModel> pair = {independent, sticky};
  ASSERT_OK_AND_ASSIGN(sup, InfluenceOverSet(pair, shape, InfluenceMethod::kExact));
  EXPECT_NEAR(sup.value, std::log(3.0), 1e-12);

  const std::vector<ChainModel> with_frozen = {sticky, frozen};
  ASSERT_OK_AND_ASSIGN(inf, InfluenceOverSet(with_frozen, shape, InfluenceMethod::kExact));
  EXPECT_TRUE(inf.is_infinite());

  EXPECT_ERROR_KIND(InfluenceOverSet({}, shape, InfluenceMethod::kExact),
                    ErrorKind::kEmptyThetaSet);
}

}  // namespace
}  // namespace quiltguard
