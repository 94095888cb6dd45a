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

#ifndef QUILTGUARD_ORACLE_H_
#define QUILTGUARD_ORACLE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "quiltguard/chain.h"
#include "quiltguard/influence.h"
#include "quiltguard/mechanism.h"

// Exact verification by enumerating every path of a short chain. Output
// densities of additive-Laplace releases are finite Laplace mixtures, and the
// log-ratio of two mixtures with common scales is monotone in each coordinate
// between consecutive atom locations, so suprema over the continuous output
// space are attained on the grid of atom locations extended by the infinite
// limits. Nothing here samples.

namespace quiltguard {

// k^T above this is refused.
inline constexpr double kEnumerationLimit = 1e6;

// An additive-Laplace release as the oracle sees it: a function of the whole
// path X_1..X_T plus Laplace(sigma) noise.
struct OracleRelease {
  std::function<double(std::span<const int>)> query;
  double sigma = 1.0;
};

// Applies `query` to the states in `window`, scaled to be 1-Lipschitz.
OracleRelease WindowedRelease(const LipschitzQuery& query, Window window,
                              double sigma);

// The release a ledger record describes, given the query it used.
OracleRelease ReleaseFromRecord(const ReleaseRecord& record,
                                const LipschitzQuery& query);

// Secret "X_node = value" (node 1-based, value a state index).
struct Secret {
  int node = 1;
  int value = 0;
};

// Laplace mixture over one or more independent-noise release coordinates:
// density(w) = sum_x weight(x) * prod_j exp(-|w_j - F_j(x)| / s_j) / (2 s_j).
struct OutputDensity {
  std::vector<double> scales;
  // Distinct location vectors, sorted lexicographically.
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;

  std::size_t dimension() const { return scales.size(); }
  // One-dimensional view: the atom locations.
  std::vector<double> breakpoints() const;
  double Density(std::span<const double> w) const;
  double TotalWeight() const;
};

// log of the density at `w`, where coordinates may be +-infinity. At an
// infinite coordinate the factor exp(-|w_j|/s_j)/(2 s_j) common to every
// mixture with the same scales is dropped, so differences of this quantity
// between two such mixtures are the limiting log density ratios.
double LogRelativeDensity(const OutputDensity& density, std::span<const double> w);

// Output density of `releases` conditioned on `secret` under `model`.
absl::StatusOr<OutputDensity> ConditionalDensity(
    const ChainModel& model, int horizon, std::span<const OracleRelease> releases,
    Secret secret);
absl::StatusOr<OutputDensity> ConditionalDensity(const ChainModel& model,
                                                 int horizon,
                                                 const OracleRelease& release,
                                                 Secret secret);

// sup over the evaluation grid of |log(a(w) / b(w))|. Fails with
// SupportMismatch unless both mixtures have the same dimension and scales.
struct SupResult {
  double value = 0.0;
  std::vector<double> point;
};
absl::StatusOr<SupResult> SupAbsLogRatio(const OutputDensity& a,
                                         const OutputDensity& b);

struct EpsilonWitness {
  std::size_t model_index = 0;
  int node = 0;
  int value_a = 0;
  int value_b = 0;
  std::vector<double> point;
};

struct EmpiricalEpsilon {
  double value = 0.0;
  EpsilonWitness witness;
};

// Smallest epsilon for which releasing all of `releases` together is
// Pufferfish private for secret pairs at `secret_nodes` under every model.
// Secrets with zero prior probability are skipped.
absl::StatusOr<EmpiricalEpsilon> EmpiricalPufferfishEpsilon(
    std::span<const ChainModel> models, int horizon,
    std::span<const OracleRelease> releases, std::span<const int> secret_nodes);

// Recomputes the log ratio at a witness.
absl::StatusOr<double> EvaluateWitness(std::span<const ChainModel> models,
                                       int horizon,
                                       std::span<const OracleRelease> releases,
                                       const EpsilonWitness& witness);

// Product of the per-coordinate marginals of a multi-coordinate mixture.
OutputDensity ProductOfMarginals(const OutputDensity& joint);

// sup_w max(log(joint/product), log(product/joint)).
absl::StatusOr<double> MaxDivergence(const OutputDensity& joint,
                                     const OutputDensity& product);

// Dependence bound E between two releases: the largest max-divergence
// between their joint output and the product of their marginals, over every
// model and every secret "X_i = a" at `secret_nodes` with positive prior.
absl::StatusOr<double> EstimateMaxDivergence(
    std::span<const ChainModel> models, int horizon, const OracleRelease& a,
    const OracleRelease& b, std::span<const int> secret_nodes);

// Max-influence of X_node on the arbitrary node set `set_nodes`, by joint
// enumeration.
absl::StatusOr<InfluenceValue> BruteForceInfluence(const ChainModel& model,
                                                   int horizon, int node,
                                                   std::span<const int> set_nodes);

// Two-state chain X_1 -> X_2 with transition [[1-q, q], [1-p, p]], secret pair
// (X_1 = 0, X_1 = 1), F = X_1 + X_2 released twice with independent Lap(1)
// noise.
struct CounterexampleReport {
  double p = 0.9;
  double q = 0.01;
  // Squared single-release candidates and joint candidates, each divided by
  // the common e or e^2 factor.
  double single_low = 0.0;   // ((q + e(1-q)) / (p + e(1-p)))^2
  double single_high = 0.0;  // ((ep + 1-p) / (eq + 1-q))^2
  double joint_low = 0.0;    // (q + e^2(1-q)) / (p + e^2(1-p))
  double joint_high = 0.0;   // (e^2 p + 1-p) / (e^2 q + 1-q)
  double closed_single_epsilon = 0.0;
  double closed_diagonal_epsilon = 0.0;
  double oracle_single_epsilon = 0.0;
  double oracle_diagonal_epsilon = 0.0;
  double oracle_joint_epsilon = 0.0;
  bool paths_agree = false;
  bool composition_violated = false;
  // The full two-dimensional supremum exceeds the diagonal one.
  bool joint_exceeds_diagonal = false;
};

absl::StatusOr<CounterexampleReport> VerifyCounterexample(double p = 0.9,
                                                          double q = 0.01);

// Joint-with-remote check: for each node, its active quilt from the exact
// quilt search at `mechanism_epsilon`, every realization of the quilt and
// remote nodes, and every secret pair at the node, the ratio of
//   p(F(X)/L + sigma_max Z = w, X_{R u Q} = x | X_i = a)
// over the same with b stays within exp(claimed_epsilon) at every exact
// evaluation point. The framework is the whole chain [1, horizon].
struct JointRemoteReport {
  bool passed = true;
  double sigma_max = 0.0;
  double worst_log_ratio = 0.0;
  int worst_node = 0;
  QuiltShape worst_quilt;
};
absl::StatusOr<JointRemoteReport> CheckJointRemoteBound(
    const ChainModel& model, int horizon, const LipschitzQuery& query,
    double mechanism_epsilon, double claimed_epsilon);

// One line of a verification report.
struct VerificationCheck {
  std::string name;
  double bound = 0.0;
  double achieved = 0.0;
  std::string witness;
  bool passed = false;
};

// Releases count:s for every state s over the whole chain [1, horizon] and
// checks each against its budget with the exact oracle, plus the
// joint-with-remote bound for each query.
absl::StatusOr<std::vector<VerificationCheck>> CheckReleaseSoundness(
    std::span<const ChainModel> models, int horizon, double epsilon,
    MechanismVariant variant = MechanismVariant::kExact);

// "model 0, X_2 = 0 vs 1, w = (1.5)" style description of a witness.
std::string DescribeWitness(const EpsilonWitness& witness);

}  // namespace quiltguard

#endif  // QUILTGUARD_ORACLE_H_
