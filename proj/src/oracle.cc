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

#include "quiltguard/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "quiltguard/errors.h"

namespace quiltguard {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using AtomMap = std::map<std::vector<double>, double>;

absl::Status CheckEnumerable(std::size_t num_states, int horizon) {
  if (horizon < 1) {
    return DomainError(ErrorKind::kInvalidLength,
                       absl::StrCat("horizon must be >= 1, got ", horizon));
  }
  if (std::pow(static_cast<double>(num_states), horizon) > kEnumerationLimit) {
    return DomainError(ErrorKind::kTooLarge,
                       absl::StrFormat("%d^%d paths exceed the enumeration bound",
                                       num_states, horizon));
  }
  return absl::OkStatus();
}

// Calls fn(path, probability) for every path of positive probability.
template <typename Fn>
void ForEachPath(const ChainModel& model, int horizon, Fn&& fn) {
  const int k = static_cast<int>(model.num_states());
  const Matrix& p = model.transition();
  std::vector<int> path(horizon, 0);
  for (;;) {
    double prob = model.initial()[path[0]];
    for (int t = 1; t < horizon && prob > 0.0; ++t) {
      prob *= p(path[t - 1], path[t]);
    }
    if (prob > 0.0) fn(std::span<const int>(path), prob);
    int pos = horizon - 1;
    while (pos >= 0 && ++path[pos] == k) path[pos--] = 0;
    if (pos < 0) return;
  }
}

OutputDensity MakeDensity(std::vector<double> scales, const AtomMap& atoms,
                          double normalizer) {
  OutputDensity density;
  density.scales = std::move(scales);
  for (const auto& [location, weight] : atoms) {
    density.atoms.push_back(location);
    density.weights.push_back(weight / normalizer);
  }
  return density;
}

std::vector<double> Scales(std::span<const OracleRelease> releases) {
  std::vector<double> scales;
  for (const OracleRelease& r : releases) scales.push_back(r.sigma);
  return scales;
}

std::vector<double> Evaluate(std::span<const OracleRelease> releases,
                             std::span<const int> path) {
  std::vector<double> values;
  values.reserve(releases.size());
  for (const OracleRelease& r : releases) values.push_back(r.query(path));
  return values;
}

double LogSumExp(const std::vector<double>& terms) {
  double top = -kInf;
  for (double t : terms) top = std::max(top, t);
  if (top == -kInf) return -kInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

// log(a(w) / b(w)); NaN when both densities vanish at w.
double LogRatio(const OutputDensity& a, const OutputDensity& b,
                std::span<const double> w) {
  const double la = LogRelativeDensity(a, w);
  const double lb = LogRelativeDensity(b, w);
  if (la == -kInf && lb == -kInf) return std::numeric_limits<double>::quiet_NaN();
  if (lb == -kInf) return kInf;
  if (la == -kInf) return -kInf;
  return la - lb;
}

// Grid of atom coordinates of both mixtures plus the infinite limits, walked
// in lexicographic order.
template <typename Fn>
void ForEachGridPoint(const OutputDensity& a, const OutputDensity& b, Fn&& fn) {
  const std::size_t d = a.dimension();
  std::vector<std::vector<double>> axes(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::set<double> coords = {-kInf, kInf};
    for (const auto& atom : a.atoms) coords.insert(atom[j]);
    for (const auto& atom : b.atoms) coords.insert(atom[j]);
    axes[j].assign(coords.begin(), coords.end());
  }
  std::vector<std::size_t> index(d, 0);
  std::vector<double> point(d);
  for (;;) {
    for (std::size_t j = 0; j < d; ++j) point[j] = axes[j][index[j]];
    fn(std::span<const double>(point));
    std::size_t pos = d;
    while (pos > 0) {
      --pos;
      if (++index[pos] < axes[pos].size()) break;
      index[pos] = 0;
      if (pos == 0) return;
    }
    if (d == 0) return;
  }
}

absl::Status CheckCompatible(const OutputDensity& a, const OutputDensity& b) {
  if (a.dimension() != b.dimension() || a.scales != b.scales) {
    return DomainError(ErrorKind::kSupportMismatch,
                       "densities differ in dimension or noise scales");
  }
  return absl::OkStatus();
}

struct NodeDensities {
  // atoms[value] and mass[value] for one secret node.
  std::vector<AtomMap> atoms;
  std::vector<double> mass;
};

// Conditional output mixtures for every (node, value) in one pass.
std::vector<NodeDensities> CollectNodeDensities(
    const ChainModel& model, int horizon, std::span<const OracleRelease> releases,
    std::span<const int> nodes) {
  const std::size_t k = model.num_states();
  std::vector<NodeDensities> out(nodes.size(),
                                 NodeDensities{std::vector<AtomMap>(k),
                                               std::vector<double>(k, 0.0)});
  ForEachPath(model, horizon, [&](std::span<const int> path, double prob) {
    const std::vector<double> location = Evaluate(releases, path);
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const int value = path[nodes[n] - 1];
      out[n].atoms[value][location] += prob;
      out[n].mass[value] += prob;
    }
  });
  return out;
}

absl::Status CheckSecretNodes(std::span<const int> nodes, int horizon) {
  for (int node : nodes) {
    if (node < 1 || node > horizon) {
      return DomainError(ErrorKind::kOutOfRange,
                         absl::StrFormat("secret node %d outside [1, %d]", node,
                                         horizon));
    }
  }
  return absl::OkStatus();
}

}  // namespace

OracleRelease WindowedRelease(const LipschitzQuery& query, Window window,
                              double sigma) {
  OracleRelease release;
  release.sigma = sigma;
  release.query = [evaluate = query.evaluate, scale = query.lipschitz_constant,
                   window](std::span<const int> path) {
    return evaluate(path.subspan(window.start - 1, window.length())) / scale;
  };
  return release;
}

OracleRelease ReleaseFromRecord(const ReleaseRecord& record,
                                const LipschitzQuery& query) {
  return WindowedRelease(query, record.framework.window, record.sigma_max);
}

std::vector<double> OutputDensity::breakpoints() const {
  std::vector<double> out;
  for (const auto& atom : atoms) out.push_back(atom.front());
  return out;
}

double OutputDensity::Density(std::span<const double> w) const {
  double total = 0.0;
  for (std::size_t x = 0; x < atoms.size(); ++x) {
    double term = weights[x];
    for (std::size_t j = 0; j < scales.size(); ++j) {
      term *= std::exp(-std::abs(w[j] - atoms[x][j]) / scales[j]) /
              (2.0 * scales[j]);
    }
    total += term;
  }
  return total;
}

double OutputDensity::TotalWeight() const {
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

double LogRelativeDensity(const OutputDensity& density,
                          std::span<const double> w) {
  std::vector<double> terms;
  terms.reserve(density.atoms.size());
  for (std::size_t x = 0; x < density.atoms.size(); ++x) {
    if (density.weights[x] <= 0.0) continue;
    double term = std::log(density.weights[x]);
    for (std::size_t j = 0; j < density.scales.size(); ++j) {
      const double s = density.scales[j];
      const double f = density.atoms[x][j];
      if (w[j] == kInf) {
        term += f / s;
      } else if (w[j] == -kInf) {
        term -= f / s;
      } else {
        term += -std::abs(w[j] - f) / s - std::log(2.0 * s);
      }
    }
    terms.push_back(term);
  }
  return LogSumExp(terms);
}

absl::StatusOr<OutputDensity> ConditionalDensity(
    const ChainModel& model, int horizon, std::span<const OracleRelease> releases,
    Secret secret) {
  if (absl::Status s = CheckEnumerable(model.num_states(), horizon); !s.ok()) {
    return s;
  }
  const int node[] = {secret.node};
  if (absl::Status s = CheckSecretNodes(node, horizon); !s.ok()) return s;
  if (secret.value < 0 ||
      secret.value >= static_cast<int>(model.num_states())) {
    return DomainError(ErrorKind::kBadState,
                       absl::StrCat("secret value ", secret.value, " out of range"));
  }
  std::vector<NodeDensities> collected =
      CollectNodeDensities(model, horizon, releases, node);
  const double mass = collected[0].mass[secret.value];
  if (mass <= 0.0) {
    return DomainError(ErrorKind::kZeroProbabilitySecret,
                       absl::StrFormat("P(X_%d = %d) is zero", secret.node,
                                       secret.value));
  }
  return MakeDensity(Scales(releases), collected[0].atoms[secret.value], mass);
}

absl::StatusOr<OutputDensity> ConditionalDensity(const ChainModel& model,
                                                 int horizon,
                                                 const OracleRelease& release,
                                                 Secret secret) {
  return ConditionalDensity(model, horizon, std::span(&release, 1), secret);
}

absl::StatusOr<SupResult> SupAbsLogRatio(const OutputDensity& a,
                                         const OutputDensity& b) {
  if (absl::Status s = CheckCompatible(a, b); !s.ok()) return s;
  SupResult best;
  ForEachGridPoint(a, b, [&](std::span<const double> w) {
    const double r = std::abs(LogRatio(a, b, w));
    if (!std::isnan(r) && (best.point.empty() || r > best.value)) {
      best.value = r;
      best.point.assign(w.begin(), w.end());
    }
  });
  return best;
}

absl::StatusOr<EmpiricalEpsilon> EmpiricalPufferfishEpsilon(
    std::span<const ChainModel> models, int horizon,
    std::span<const OracleRelease> releases, std::span<const int> secret_nodes) {
  if (models.empty()) {
    return DomainError(ErrorKind::kEmptyThetaSet, "no chain models supplied");
  }
  if (absl::Status s = CheckSecretNodes(secret_nodes, horizon); !s.ok()) return s;
  EmpiricalEpsilon result;
  bool have_witness = false;
  const std::vector<double> scales = Scales(releases);
  for (std::size_t m = 0; m < models.size(); ++m) {
    const ChainModel& model = models[m];
    if (absl::Status s = CheckEnumerable(model.num_states(), horizon); !s.ok()) {
      return s;
    }
    const std::vector<NodeDensities> collected =
        CollectNodeDensities(model, horizon, releases, secret_nodes);
    const int k = static_cast<int>(model.num_states());
    for (std::size_t n = 0; n < secret_nodes.size(); ++n) {
      const NodeDensities& node = collected[n];
      for (int a = 0; a < k; ++a) {
        if (node.mass[a] <= 0.0) continue;
        const OutputDensity da = MakeDensity(scales, node.atoms[a], node.mass[a]);
        for (int b = a + 1; b < k; ++b) {
          if (node.mass[b] <= 0.0) continue;
          const OutputDensity db =
              MakeDensity(scales, node.atoms[b], node.mass[b]);
          absl::StatusOr<SupResult> sup = SupAbsLogRatio(da, db);
          if (!sup.ok()) return sup.status();
          if (!have_witness || sup->value > result.value) {
            have_witness = true;
            result.value = sup->value;
            result.witness = {m, secret_nodes[n], a, b, sup->point};
          }
        }
      }
    }
  }
  return result;
}

absl::StatusOr<double> EvaluateWitness(std::span<const ChainModel> models,
                                       int horizon,
                                       std::span<const OracleRelease> releases,
                                       const EpsilonWitness& witness) {
  if (witness.model_index >= models.size()) {
    return DomainError(ErrorKind::kOutOfRange, "witness model index out of range");
  }
  const ChainModel& model = models[witness.model_index];
  absl::StatusOr<OutputDensity> a = ConditionalDensity(
      model, horizon, releases, Secret{witness.node, witness.value_a});
  if (!a.ok()) return a.status();
  absl::StatusOr<OutputDensity> b = ConditionalDensity(
      model, horizon, releases, Secret{witness.node, witness.value_b});
  if (!b.ok()) return b.status();
  return std::abs(LogRatio(*a, *b, witness.point));
}

OutputDensity ProductOfMarginals(const OutputDensity& joint) {
  const std::size_t d = joint.dimension();
  std::vector<std::map<double, double>> marginals(d);
  for (std::size_t x = 0; x < joint.atoms.size(); ++x) {
    for (std::size_t j = 0; j < d; ++j) {
      marginals[j][joint.atoms[x][j]] += joint.weights[x];
    }
  }
  AtomMap product = {{std::vector<double>{}, 1.0}};
  for (std::size_t j = 0; j < d; ++j) {
    AtomMap next;
    for (const auto& [prefix, weight] : product) {
      for (const auto& [location, mass] : marginals[j]) {
        std::vector<double> extended = prefix;
        extended.push_back(location);
        next[extended] += weight * mass;
      }
    }
    product = std::move(next);
  }
  return MakeDensity(joint.scales, product, 1.0);
}

absl::StatusOr<double> MaxDivergence(const OutputDensity& joint,
                                     const OutputDensity& product) {
  absl::StatusOr<SupResult> sup = SupAbsLogRatio(joint, product);
  if (!sup.ok()) return sup.status();
  return sup->value;
}

absl::StatusOr<double> EstimateMaxDivergence(
    std::span<const ChainModel> models, int horizon, const OracleRelease& a,
    const OracleRelease& b, std::span<const int> secret_nodes) {
  if (models.empty()) {
    return DomainError(ErrorKind::kEmptyThetaSet, "no chain models supplied");
  }
  if (absl::Status s = CheckSecretNodes(secret_nodes, horizon); !s.ok()) return s;
  const std::vector<OracleRelease> releases = {a, b};
  double divergence = 0.0;
  for (const ChainModel& model : models) {
    if (absl::Status s = CheckEnumerable(model.num_states(), horizon); !s.ok()) {
      return s;
    }
    const std::vector<NodeDensities> collected =
        CollectNodeDensities(model, horizon, releases, secret_nodes);
    for (const NodeDensities& node : collected) {
      for (std::size_t value = 0; value < node.mass.size(); ++value) {
        if (node.mass[value] <= 0.0) continue;
        const OutputDensity joint =
            MakeDensity(Scales(releases), node.atoms[value], node.mass[value]);
        absl::StatusOr<double> d = MaxDivergence(joint, ProductOfMarginals(joint));
        if (!d.ok()) return d.status();
        divergence = std::max(divergence, *d);
      }
    }
  }
  return divergence;
}

absl::StatusOr<InfluenceValue> BruteForceInfluence(const ChainModel& model,
                                                   int horizon, int node,
                                                   std::span<const int> set_nodes) {
  if (absl::Status s = CheckEnumerable(model.num_states(), horizon); !s.ok()) {
    return s;
  }
  const int node_list[] = {node};
  if (absl::Status s = CheckSecretNodes(node_list, horizon); !s.ok()) return s;
  if (absl::Status s = CheckSecretNodes(set_nodes, horizon); !s.ok()) return s;

  const std::size_t k = model.num_states();
  std::vector<std::map<std::vector<int>, double>> joint(k);
  std::vector<double> mass(k, 0.0);
  ForEachPath(model, horizon, [&](std::span<const int> path, double prob) {
    std::vector<int> key;
    for (int s : set_nodes) key.push_back(path[s - 1]);
    joint[path[node - 1]][key] += prob;
    mass[path[node - 1]] += prob;
  });

  InfluenceValue result{0.0, InfluenceMethod::kExact};
  for (std::size_t u = 0; u < k; ++u) {
    if (mass[u] <= 0.0) continue;
    for (std::size_t v = 0; v < k; ++v) {
      if (v == u || mass[v] <= 0.0) continue;
      for (const auto& [key, weight] : joint[u]) {
        const double numerator = weight / mass[u];
        auto it = joint[v].find(key);
        const double denominator = it == joint[v].end() ? 0.0 : it->second / mass[v];
        if (denominator <= 0.0) {
          result.value = InfluenceValue::kInfinity;
          return result;
        }
        result.value = std::max(result.value, std::log(numerator / denominator));
      }
    }
  }
  return result;
}

absl::StatusOr<CounterexampleReport> VerifyCounterexample(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    return DomainError(ErrorKind::kOutOfRange,
                       absl::StrCat("p and q must lie in [0, 1], got p = ", p,
                                    ", q = ", q));
  }
  CounterexampleReport report;
  report.p = p;
  report.q = q;
  const double e = std::numbers::e;
  const double e2 = e * e;

  // Closed-form candidates from the case analysis of the two-node chain.
  report.single_low = std::pow((q + e * (1 - q)) / (p + e * (1 - p)), 2);
  report.single_high = std::pow((e * p + (1 - p)) / (e * q + (1 - q)), 2);
  report.joint_low = (q + e2 * (1 - q)) / (p + e2 * (1 - p));
  report.joint_high = (e2 * p + (1 - p)) / (e2 * q + (1 - q));
  // max{S, 1/S} = e * sqrt(candidate); max{D, 1/D} on the diagonal = e^2 * candidate.
  report.closed_single_epsilon =
      1.0 + 0.5 * std::log(std::max(report.single_low, report.single_high));
  report.closed_diagonal_epsilon =
      2.0 + std::log(std::max(report.joint_low, report.joint_high));

  absl::StatusOr<ChainModel> model =
      ChainModel::FromProbabilities({0.5, 0.5}, {{1 - q, q}, {1 - p, p}});
  if (!model.ok()) return model.status();
  auto sum = [](std::span<const int> x) {
    return static_cast<double>(x[0] + x[1]);
  };
  const std::vector<ChainModel> models = {*model};
  const int secret_nodes[] = {1};

  const std::vector<OracleRelease> single = {{sum, 1.0}};
  // On the diagonal w1 = w2 = w the joint density is a Laplace mixture in w
  // with scale 1/2 (up to a constant that cancels in ratios).
  const std::vector<OracleRelease> diagonal = {{sum, 0.5}};
  const std::vector<OracleRelease> joint = {{sum, 1.0}, {sum, 1.0}};

  absl::StatusOr<EmpiricalEpsilon> eps =
      EmpiricalPufferfishEpsilon(models, 2, single, secret_nodes);
  if (!eps.ok()) return eps.status();
  report.oracle_single_epsilon = eps->value;
  eps = EmpiricalPufferfishEpsilon(models, 2, diagonal, secret_nodes);
  if (!eps.ok()) return eps.status();
  report.oracle_diagonal_epsilon = eps->value;
  eps = EmpiricalPufferfishEpsilon(models, 2, joint, secret_nodes);
  if (!eps.ok()) return eps.status();
  report.oracle_joint_epsilon = eps->value;

  constexpr double kAgreement = 1e-6;
  report.paths_agree =
      std::abs(report.oracle_single_epsilon - report.closed_single_epsilon) <=
          kAgreement &&
      std::abs(report.oracle_diagonal_epsilon - report.closed_diagonal_epsilon) <=
          kAgreement;
  report.composition_violated =
      report.joint_high > report.single_high &&
      report.oracle_joint_epsilon > 2.0 * report.oracle_single_epsilon;
  report.joint_exceeds_diagonal =
      report.oracle_joint_epsilon > report.oracle_diagonal_epsilon + kAgreement;
  return report;
}

absl::StatusOr<JointRemoteReport> CheckJointRemoteBound(
    const ChainModel& model, int horizon, const LipschitzQuery& query,
    double mechanism_epsilon, double claimed_epsilon) {
  if (absl::Status s = CheckEnumerable(model.num_states(), horizon); !s.ok()) {
    return s;
  }
  Framework framework{horizon, Window{1, horizon}, {model}, {}};
  absl::StatusOr<NoiseCalibration> calibration = CalibrateNoise(
      framework, mechanism_epsilon, MechanismVariant::kExact);
  if (!calibration.ok()) return calibration.status();

  JointRemoteReport report;
  report.sigma_max = calibration->sigma_max;
  const std::vector<double> scales = {report.sigma_max};
  const int k = static_cast<int>(model.num_states());

  for (const ActiveQuilt& active : calibration->per_model.front().nodes) {
    const QuiltShape& shape = active.shape;
    const int i = shape.node;
    const int nearby_lo = shape.left ? i - *shape.left + 1 : 1;
    const int nearby_hi = shape.right ? i + *shape.right - 1 : horizon;

    // dens[value][x_{R u Q}] = unnormalized mixture of F over the rest.
    std::vector<std::map<std::vector<int>, AtomMap>> dens(k);
    std::vector<double> mass(k, 0.0);
    ForEachPath(model, horizon, [&](std::span<const int> path, double prob) {
      std::vector<int> remote;
      for (int t = 1; t <= horizon; ++t) {
        if (t < nearby_lo || t > nearby_hi) remote.push_back(path[t - 1]);
      }
      const double f = query.evaluate(path) / query.lipschitz_constant;
      dens[path[i - 1]][remote][{f}] += prob;
      mass[path[i - 1]] += prob;
    });

    for (int a = 0; a < k; ++a) {
      if (mass[a] <= 0.0) continue;
      for (int b = 0; b < k; ++b) {
        if (b == a || mass[b] <= 0.0) continue;
        for (const auto& [remote, atoms_a] : dens[a]) {
          const OutputDensity da = MakeDensity(scales, atoms_a, mass[a]);
          auto it = dens[b].find(remote);
          const OutputDensity db = it == dens[b].end()
                                       ? MakeDensity(scales, {}, 1.0)
                                       : MakeDensity(scales, it->second, mass[b]);
          double worst = 0.0;
          ForEachGridPoint(da, db, [&](std::span<const double> w) {
            const double r = LogRatio(da, db, w);
            if (!std::isnan(r)) worst = std::max(worst, r);
          });
          if (worst > report.worst_log_ratio) {
            report.worst_log_ratio = worst;
            report.worst_node = i;
            report.worst_quilt = shape;
          }
        }
      }
    }
  }
  report.passed = report.worst_log_ratio <= claimed_epsilon + 1e-9;
  return report;
}

std::string DescribeWitness(const EpsilonWitness& witness) {
  return absl::StrFormat("model %d, X_%d = %d vs %d, w = (%s)",
                         witness.model_index, witness.node, witness.value_a,
                         witness.value_b, absl::StrJoin(witness.point, ", "));
}

absl::StatusOr<std::vector<VerificationCheck>> CheckReleaseSoundness(
    std::span<const ChainModel> models, int horizon, double epsilon,
    MechanismVariant variant) {
  if (models.empty()) {
    return DomainError(ErrorKind::kEmptyThetaSet, "no chain models supplied");
  }
  Framework framework{horizon, Window{1, horizon},
                      std::vector<ChainModel>(models.begin(), models.end()), {}};
  absl::StatusOr<NoiseCalibration> calibration =
      CalibrateNoise(framework, epsilon, variant);
  if (!calibration.ok()) return calibration.status();

  std::vector<int> nodes(horizon);
  for (int t = 1; t <= horizon; ++t) nodes[t - 1] = t;
  const int k = static_cast<int>(models.front().num_states());
  std::vector<VerificationCheck> checks;
  for (int state = 0; state < k; ++state) {
    absl::StatusOr<LipschitzQuery> query = CountStateQuery(state, k);
    if (!query.ok()) return query.status();
    const OracleRelease release =
        WindowedRelease(*query, framework.window, calibration->sigma_max);
    absl::StatusOr<EmpiricalEpsilon> empirical = EmpiricalPufferfishEpsilon(
        models, horizon, std::span(&release, 1), nodes);
    if (!empirical.ok()) return empirical.status();
    checks.push_back({absl::StrFormat("empirical epsilon, %s", query->id), epsilon,
                      empirical->value, DescribeWitness(empirical->witness),
                      empirical->value <= epsilon + 1e-6});
    // The joint check is defined for a single belief.
    if (variant != MechanismVariant::kExact || models.size() != 1) continue;
    absl::StatusOr<JointRemoteReport> joint =
        CheckJointRemoteBound(models.front(), horizon, *query, epsilon, epsilon);
    if (!joint.ok()) return joint.status();
    checks.push_back({absl::StrFormat("joint with remote nodes, %s", query->id),
                      epsilon, joint->worst_log_ratio,
                      absl::StrFormat("node %d, quilt %s", joint->worst_node,
                                      joint->worst_quilt.DebugString()),
                      joint->passed});
  }
  return checks;
}

}  // namespace quiltguard
