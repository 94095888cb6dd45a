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

#ifndef QUILTGUARD_RANDOM_H_
#define QUILTGUARD_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace quiltguard {

// All randomness flows through an explicitly seeded 64-bit Mersenne twister.
// The conversions below are written out rather than taken from <random>
// distributions, whose output is implementation-defined, so draws are
// reproducible across standard libraries.
using Rng = std::mt19937_64;

// Uniform on the open interval (0, 1) with 53 bits of resolution.
inline double UniformOpen01(Rng& rng) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

// Index drawn from `weights` (assumed to sum to one) by inverse CDF.
inline int SampleIndex(std::span<const double> weights, Rng& rng) {
  const double u = UniformOpen01(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  // Roundoff left the total slightly below u: take the last positive entry.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

// Laplace(0, scale) by inverse CDF of a single uniform draw.
inline double SampleLaplace(double scale, Rng& rng) {
  const double u = UniformOpen01(rng) - 0.5;
  const double magnitude = -std::log1p(-2.0 * std::abs(u));
  return scale * (u < 0 ? -magnitude : magnitude);
}

}  // namespace quiltguard

#endif  // QUILTGUARD_RANDOM_H_
