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

// quiltguard: fit chains, release counts through the quilt mechanism, keep a
// release ledger, compose guarantees and run exact verification.
//
// Exit status: 0 on success, 1 on a usage error, 2 when a domain
// precondition fails (the message names it).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "quiltguard/chain.h"
#include "quiltguard/composition.h"
#include "quiltguard/errors.h"
#include "quiltguard/fit.h"
#include "quiltguard/influence.h"
#include "quiltguard/ledger.h"
#include "quiltguard/mechanism.h"
#include "quiltguard/oracle.h"
#include "quiltguard/serialization.h"

namespace quiltguard {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;

bool json_output = false;

absl::Status Usage(absl::string_view message) {
  return absl::InvalidArgumentError(message);
}

void Emit(const Json& json) { std::cout << json.dump(2) << "\n"; }

std::string Num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return absl::StrFormat("%.10g", x);
}

#define QG_ASSIGN(lhs, expr)                  \
  auto lhs##_or = (expr);                     \
  if (!lhs##_or.ok()) return lhs##_or.status(); \
  auto& lhs = *lhs##_or

#define QG_RETURN_IF_ERROR(expr)                   \
  do {                                             \
    if (absl::Status s_ = (expr); !s_.ok()) return s_; \
  } while (0)

absl::StatusOr<std::vector<ChainModel>> LoadModels(
    const std::vector<std::string>& paths) {
  std::vector<ChainModel> models;
  for (const std::string& path : paths) {
    absl::StatusOr<ChainModel> model = LoadModel(path);
    if (!model.ok()) {
      absl::Status status(model.status().code(),
                          absl::StrCat(path, ": ", model.status().message()));
      model.status().ForEachPayload(
          [&](absl::string_view url, const absl::Cord& payload) {
            status.SetPayload(url, payload);
          });
      return status;
    }
    if (!models.empty() && model->states() != models.front().states()) {
      return DomainError(ErrorKind::kAlphabetMismatch,
                         absl::StrCat(path, " has different state labels than ",
                                      paths.front()));
    }
    models.push_back(*std::move(model));
  }
  if (models.empty()) return Usage("at least one --model is required");
  return models;
}

absl::StatusOr<std::vector<std::string>> LoadLabels(const std::string& path) {
  QG_ASSIGN(text, ReadFile(path));
  return ParseSequenceCsv(text);
}

absl::StatusOr<Window> ParseWindow(const std::string& text, int horizon) {
  if (text.empty()) return Window{1, horizon};
  std::vector<std::string> parts = absl::StrSplit(text, ':');
  Window w;
  if (parts.size() != 2 || !absl::SimpleAtoi(parts[0], &w.start) ||
      !absl::SimpleAtoi(parts[1], &w.end)) {
    return Usage(absl::StrCat("--window expects START:END, got '", text, "'"));
  }
  if (w.start < 1 || w.end < w.start || w.end > horizon) {
    return DomainError(ErrorKind::kOutOfRange,
                       absl::StrFormat("window [%d, %d] not inside [1, %d]",
                                       w.start, w.end, horizon));
  }
  return w;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::vector<std::string> data;
  double alpha = 1.0;
  int min_sequences = 1;
  std::vector<std::string> states;
  std::string out;
};

absl::Status RunFit(const FitArgs& args) {
  std::vector<std::vector<std::string>> sequences;
  for (const std::string& path : args.data) {
    QG_ASSIGN(labels, LoadLabels(path));
    sequences.push_back(labels);
  }
  FitConfig config{args.alpha, args.min_sequences};
  std::optional<std::vector<std::string>> states;
  if (!args.states.empty()) states = args.states;
  QG_ASSIGN(model, FitChain(sequences, config, states));
  if (!args.out.empty()) {
    QG_RETURN_IF_ERROR(SaveModel(model, args.out));
    if (!json_output) std::cout << "wrote " << args.out << "\n";
  }
  if (json_output || args.out.empty()) Emit(ModelToJson(model));
  return absl::OkStatus();
}

// ---------------------------------------------------------------- gap

absl::Status RunGap(const std::string& model_path) {
  QG_ASSIGN(model, LoadModel(model_path));
  QG_ASSIGN(info, Spectral(model));
  if (json_output) {
    Json reversal = Json::array();
    for (const auto& row : info.reversal.ToRows()) reversal.push_back(row);
    Emit({{"stationary", info.stationary},
          {"pi_min", info.pi_min},
          {"gap", info.gap},
          {"eigenvalues", info.eigenvalues},
          {"reversal", reversal},
          {"approx_offset_threshold", EncodeNumber(ApproxOffsetThreshold(info))}});
    return absl::OkStatus();
  }
  std::cout << "state      pi\n";
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    std::cout << absl::StrFormat("%-10s %.12g\n", model.states()[i],
                                 info.stationary[i]);
  }
  std::cout << "pi_min     " << Num(info.pi_min) << "\n"
            << "gap        " << Num(info.gap) << "\n"
            << "eigenvalues of P P*: "
            << absl::StrJoin(info.eigenvalues, " ",
                             [](std::string* out, double x) {
                               absl::StrAppend(out, Num(x));
                             })
            << "\n"
            << "approx bound needs offsets >= "
            << Num(ApproxOffsetThreshold(info)) << "\n";
  return absl::OkStatus();
}

// ---------------------------------------------------------------- release

struct ReleaseArgs {
  std::vector<std::string> models;
  std::string data;
  std::string query;
  double epsilon = 0.0;
  std::string variant = "exact";
  std::uint64_t seed = 0;
  std::string ledger;
  std::string window;
  bool whole_chain = false;
  bool two_sided_only = false;
};

absl::Status RunRelease(const ReleaseArgs& args) {
  QG_ASSIGN(models, LoadModels(args.models));
  QG_ASSIGN(labels, LoadLabels(args.data));
  QG_ASSIGN(sequence, LabelsToSequence(models.front(), labels));
  if (sequence.length() == 0) {
    return DomainError(ErrorKind::kInvalidLength, "data file has no states");
  }
  QG_ASSIGN(variant, ParseVariant(args.variant));
  const int horizon = sequence.length();
  QG_ASSIGN(window, ParseWindow(args.window, horizon));

  Framework framework{horizon, window, models, args.models};
  MechanismOptions options;
  options.scope = args.whole_chain ? NodeScope::kWholeChain : NodeScope::kWindow;
  options.approx_two_sided_only = args.two_sided_only;
  StateSequence slice;
  slice.values.assign(sequence.values.begin() + (window.start - 1),
                      sequence.values.begin() + window.end);

  const int k = static_cast<int>(models.front().num_states());
  std::vector<int> states;
  if (args.query == "histogram") {
    for (int s = 0; s < k; ++s) states.push_back(s);
  } else if (absl::StartsWith(args.query, "count:")) {
    const std::string label = args.query.substr(6);
    std::optional<int> index = models.front().StateIndex(label);
    if (!index) {
      return DomainError(ErrorKind::kBadState,
                         absl::StrCat("unknown state '", label, "' in --query"));
    }
    states.push_back(*index);
  } else {
    return Usage(absl::StrCat("--query expects count:STATE or histogram, got '",
                              args.query, "'"));
  }

  std::vector<ReleaseRecord> records;
  Json released = Json::array();
  for (std::size_t n = 0; n < states.size(); ++n) {
    QG_ASSIGN(query, CountStateQuery(states[n], k));
    QG_ASSIGN(record, Release(slice, query, args.epsilon, framework, variant,
                              args.seed + n, options));
    if (!args.ledger.empty()) {
      QG_ASSIGN(entry, AppendToLedger(args.ledger, record));
      record.id = entry.id;
    }
    const double w = record.output * record.lipschitz_scale;
    if (json_output) {
      Json j = RecordToJson(record);
      j["w"] = EncodeNumber(w);
      released.push_back(std::move(j));
    } else {
      std::cout << absl::StrFormat(
          "%s  w = %.17g  sigma_max = %.17g  epsilon = %s%s\n",
          absl::StrCat("count:", models.front().states()[states[n]]), w,
          record.sigma_max, Num(record.epsilon),
          record.id > 0 ? absl::StrCat("  ledger id = ", record.id) : "");
    }
    records.push_back(std::move(record));
  }
  if (records.size() > 1) {
    QG_ASSIGN(report, ComposeSequentialMqm(records));
    if (json_output) {
      Emit({{"releases", released}, {"composition", ReportToJson(report)}});
    } else {
      std::cout << "histogram epsilon (" << RuleWireName(report.rule)
                << ") = " << Num(report.epsilon) << "\n";
    }
  } else if (json_output) {
    Emit(released.front());
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------- compose

struct ComposeArgs {
  std::string ledger;
  std::vector<std::int64_t> ids;
  std::string rule = "auto";
  std::optional<double> divergence;
  std::string influence = "exact";
};

// Oracle estimate of the max-divergence between two recorded releases.
absl::StatusOr<double> EstimateDivergence(const ReleaseRecord& a,
                                          const ReleaseRecord& b) {
  if (!SameFramework(a.framework, b.framework)) {
    return DomainError(ErrorKind::kMixedFrameworks,
                       "estimating E needs both releases on one framework");
  }
  const int k = static_cast<int>(a.framework.models.front().num_states());
  QG_ASSIGN(qa, QueryFromId(a.query_id, k));
  QG_ASSIGN(qb, QueryFromId(b.query_id, k));
  std::vector<int> nodes;
  for (int t = a.framework.window.start; t <= a.framework.window.end; ++t) {
    nodes.push_back(t);
  }
  return EstimateMaxDivergence(a.framework.models, a.framework.horizon,
                               ReleaseFromRecord(a, qa), ReleaseFromRecord(b, qb),
                               nodes);
}

void PrintReport(const CompositionReport& report) {
  std::cout << "epsilon  " << Num(report.epsilon)
            << (report.has_finite_guarantee() ? "" : "  (no finite guarantee)")
            << "\nrule     " << RuleWireName(report.rule)
            << (report.heuristic ? "  (heuristic, not a proven bound)" : "")
            << "\ninputs   " << absl::StrJoin(report.inputs, ",") << "\n";
  for (const ConditionCheck& check : report.checks) {
    std::cout << absl::StrFormat("check    %-32s %s  %s\n", check.name,
                                 check.passed ? "pass" : "FAIL", check.evidence);
  }
  for (const std::string& note : report.notes) std::cout << "note     " << note << "\n";
}

absl::Status RunCompose(const ComposeArgs& args) {
  QG_ASSIGN(entries, ReadLedger(args.ledger));
  QG_ASSIGN(records, SelectRecords(entries, args.ids));
  const InfluenceMethod method = args.influence == "approx"
                                     ? InfluenceMethod::kApprox
                                     : InfluenceMethod::kExact;
  absl::StatusOr<CompositionReport> report;
  if (args.rule == "auto") {
    report = ComposeAuto(records, method);
  } else {
    QG_ASSIGN(rule, ParseRuleWireName(args.rule));
    const bool pair_rule = rule == CompositionRule::kParallelGeneral ||
                           rule == CompositionRule::kParallelMqmApprox ||
                           rule == CompositionRule::kSequentialGeneral;
    if (pair_rule && records.size() != 2) {
      return Usage(absl::StrCat(args.rule, " composes exactly two records"));
    }
    switch (rule) {
      case CompositionRule::kSequentialMqm:
        report = ComposeSequentialMqm(records);
        break;
      case CompositionRule::kSequentialFixedQuilts:
        report = ComposeSequentialFixedQuilts(records);
        break;
      case CompositionRule::kParallelGeneral:
        report = ComposeParallelGeneral(records[0], records[1], method);
        break;
      case CompositionRule::kParallelMqmApprox:
        report = ComposeParallelMqmApprox(records[0], records[1], method);
        break;
      case CompositionRule::kSequentialGeneral: {
        double divergence = 0.0;
        if (args.divergence) {
          divergence = *args.divergence;
        } else {
          QG_ASSIGN(estimate, EstimateDivergence(records[0], records[1]));
          divergence = estimate;
        }
        report = ComposeSequentialGeneral(records[0].epsilon, records[1].epsilon,
                                          divergence);
        if (report.ok()) {
          report->inputs = {records[0].id, records[1].id};
          if (!args.divergence) {
            report->notes.push_back(absl::StrCat(
                "E = ", Num(divergence), " estimated by exact enumeration"));
          }
        }
        break;
      }
    }
  }
  if (!report.ok()) return report.status();
  if (json_output) {
    Emit(ReportToJson(*report));
  } else {
    PrintReport(*report);
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------- verify

absl::Status FinishVerification(const std::vector<VerificationCheck>& checks) {
  bool passed = true;
  for (const VerificationCheck& c : checks) passed = passed && c.passed;
  if (json_output) {
    Emit(VerificationToJson(checks));
  } else {
    for (const VerificationCheck& c : checks) {
      std::cout << absl::StrFormat("%s  %-44s achieved %-14s bound %-14s %s\n",
                                   c.passed ? "PASS" : "FAIL", c.name,
                                   Num(c.achieved), Num(c.bound), c.witness);
    }
  }
  if (!passed) return absl::InternalError("verification failed");
  return absl::OkStatus();
}

absl::Status RunCounterexample(double p, double q) {
  QG_ASSIGN(r, VerifyCounterexample(p, q));
  if (json_output) {
    Emit({{"p", r.p},
          {"q", r.q},
          {"single_low", r.single_low},
          {"single_high", r.single_high},
          {"joint_low", r.joint_low},
          {"joint_high", r.joint_high},
          {"closed_single_epsilon", r.closed_single_epsilon},
          {"closed_diagonal_epsilon", r.closed_diagonal_epsilon},
          {"oracle_single_epsilon", r.oracle_single_epsilon},
          {"oracle_diagonal_epsilon", r.oracle_diagonal_epsilon},
          {"oracle_joint_epsilon", r.oracle_joint_epsilon},
          {"paths_agree", r.paths_agree},
          {"composition_violated", r.composition_violated},
          {"joint_exceeds_diagonal", r.joint_exceeds_diagonal}});
  } else {
    std::cout << absl::StrFormat(
        "chain X1 -> X2, P = [[%g, %g], [%g, %g]], F = X1 + X2, Lap(1) noise\n",
        1 - r.q, r.q, 1 - r.p, r.p);
    std::cout << absl::StrFormat("single release:  e^2 max{%.4f, %.4f}\n",
                                 r.single_low, r.single_high);
    std::cout << absl::StrFormat("two releases:    e^2 max{%.4f, %.4f}\n",
                                 r.joint_low, r.joint_high);
    std::cout << absl::StrFormat(
        "epsilon of one release:    closed form %.12f  oracle %.12f\n",
        r.closed_single_epsilon, r.oracle_single_epsilon);
    std::cout << absl::StrFormat(
        "epsilon on the diagonal:   closed form %.12f  oracle %.12f\n",
        r.closed_diagonal_epsilon, r.oracle_diagonal_epsilon);
    std::cout << absl::StrFormat(
        "epsilon of both releases:  oracle %.12f (full plane%s)\n",
        r.oracle_joint_epsilon,
        r.joint_exceeds_diagonal ? ", above the diagonal value"
                                 : ", attained on the diagonal");
    std::cout << "closed form and oracle " << (r.paths_agree ? "agree" : "DISAGREE")
              << "\n";
    if (r.composition_violated) {
      std::cout << absl::StrFormat("SEQUENTIAL COMPOSITION VIOLATED: %.4f > %.4f\n",
                                   r.joint_high, r.single_high);
    } else {
      std::cout << absl::StrFormat("sequential composition holds: %.4f <= %.4f\n",
                                   r.joint_high, r.single_high);
    }
  }
  if (!r.paths_agree) return absl::InternalError("closed form and oracle disagree");
  return absl::OkStatus();
}

struct SoundnessArgs {
  std::vector<std::string> models;
  int horizon = 4;
  double epsilon = 1.0;
  int seeds = 0;
  std::string variant = "exact";
};

absl::Status RunSoundness(const SoundnessArgs& args) {
  QG_ASSIGN(variant, ParseVariant(args.variant));
  if (args.models.empty() && args.seeds <= 0) {
    return Usage("soundness needs --model or --seeds N");
  }
  std::vector<VerificationCheck> checks;
  auto add = [&](const std::string& prefix, std::span<const ChainModel> models)
      -> absl::Status {
    QG_ASSIGN(found, CheckReleaseSoundness(models, args.horizon, args.epsilon,
                                           variant));
    for (VerificationCheck& c : found) {
      c.name = absl::StrCat(prefix, ": ", c.name);
      checks.push_back(std::move(c));
    }
    return absl::OkStatus();
  };
  if (!args.models.empty()) {
    QG_ASSIGN(models, LoadModels(args.models));
    QG_RETURN_IF_ERROR(add("belief set", models));
  }
  for (int seed = 1; seed <= args.seeds; ++seed) {
    Rng rng(seed);
    const ChainModel model = RandomPositiveModel(2, rng);
    QG_RETURN_IF_ERROR(add(absl::StrCat("random chain ", seed),
                           std::span(&model, 1)));
  }
  return FinishVerification(checks);
}

// Randomized checks of the influence inequalities and the joint-with-remote
// bound on enumerable chains.
absl::Status RunLemmas(int seeds) {
  std::vector<VerificationCheck> checks;
  Rng rng(20260101);
  double worst_monotone = -InfluenceValue::kInfinity;
  std::string monotone_witness;
  double worst_dominance = -InfluenceValue::kInfinity;
  std::string dominance_witness;
  for (int n = 0; n < seeds; ++n) {
    // Nested sets S within R, both avoiding the node.
    const int k = 2 + static_cast<int>(rng() % 2);
    const int horizon = 2 + static_cast<int>(rng() % 4);
    const ChainModel model = RandomPositiveModel(k, rng);
    const int node = 1 + static_cast<int>(rng() % horizon);
    std::vector<int> r_nodes, s_nodes;
    for (int t = 1; t <= horizon; ++t) {
      if (t != node && rng() % 2) r_nodes.push_back(t);
    }
    for (int t : r_nodes) {
      if (rng() % 2) s_nodes.push_back(t);
    }
    QG_ASSIGN(on_s, BruteForceInfluence(model, horizon, node, s_nodes));
    QG_ASSIGN(on_r, BruteForceInfluence(model, horizon, node, r_nodes));
    const double excess = on_s.value - on_r.value;
    if (excess > worst_monotone) {
      worst_monotone = excess;
      monotone_witness = absl::StrFormat("T=%d k=%d i=%d S={%s} R={%s}", horizon,
                                         k, node, absl::StrJoin(s_nodes, ","),
                                         absl::StrJoin(r_nodes, ","));
    }

    // Spectral bound against the exact value beyond its offset threshold.
    const ChainModel chain = RandomPositiveModel(2 + static_cast<int>(rng() % 3), rng);
    QG_ASSIGN(info, Spectral(chain));
    const int base = static_cast<int>(std::ceil(ApproxOffsetThreshold(info)));
    const int a = std::max(1, base) + static_cast<int>(rng() % 3);
    const int b = std::max(1, base) + static_cast<int>(rng() % 3);
    const QuiltShape shape{a + 1, a, b};
    QG_ASSIGN(exact, ExactMaxInfluence(chain, shape));
    const InfluenceValue approx = ApproxMaxInfluence(info, shape);
    const double gap = exact.value - approx.value;
    if (gap > worst_dominance) {
      worst_dominance = gap;
      dominance_witness = absl::StrFormat("k=%d a=%d b=%d exact=%s bound=%s",
                                          chain.num_states(), a, b,
                                          Num(exact.value), Num(approx.value));
    }
  }
  checks.push_back({"influence on S minus influence on R", 1e-9, worst_monotone,
                    monotone_witness, worst_monotone <= 1e-9});
  checks.push_back({"exact influence minus spectral bound", 1e-9, worst_dominance,
                    dominance_witness, worst_dominance <= 1e-9});

  double worst_joint = 0.0;
  std::string joint_witness;
  bool joint_passed = true;
  for (int n = 0; n < std::min(seeds, 50); ++n) {
    const ChainModel model = RandomPositiveModel(2, rng);
    QG_ASSIGN(query, CountStateQuery(static_cast<int>(rng() % 2), 2));
    QG_ASSIGN(report, CheckJointRemoteBound(model, 3, query, 1.0, 1.0));
    joint_passed = joint_passed && report.passed;
    if (report.worst_log_ratio >= worst_joint) {
      worst_joint = report.worst_log_ratio;
      joint_witness = absl::StrFormat("seed %d node %d quilt %s", n,
                                      report.worst_node,
                                      report.worst_quilt.DebugString());
    }
  }
  checks.push_back({"joint with remote nodes, T=3, epsilon=1", 1.0, worst_joint,
                    joint_witness, joint_passed});
  return FinishVerification(checks);
}

// ---------------------------------------------------------------- simulate

absl::Status RunSimulate(const std::string& model_path, int length,
                         std::uint64_t seed, const std::string& out) {
  QG_ASSIGN(model, LoadModel(model_path));
  QG_ASSIGN(sequence, Sample(model, length, seed));
  const std::string csv = FormatSequenceCsv(SequenceToLabels(model, sequence));
  if (out.empty()) {
    std::cout << csv;
    return absl::OkStatus();
  }
  return WriteFile(out, csv);
}

int Main(int argc, char** argv) {
  CLI::App app{"Correlation-aware private release for Markov-chain data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", json_output, "Print machine-readable JSON");
  std::function<absl::Status()> run;

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Estimate a chain from sequences");
  fit_cmd->add_option("--data", fit.data, "State CSV file (repeatable)")
      ->required()
      ->delimiter(',');
  fit_cmd->add_option("--alpha", fit.alpha, "Additive smoothing")
      ->capture_default_str();
  fit_cmd->add_option("--min-sequences", fit.min_sequences)->capture_default_str();
  fit_cmd->add_option("--states", fit.states, "Alphabet, in order")->delimiter(',');
  fit_cmd->add_option("--out", fit.out, "Output model JSON");
  fit_cmd->callback([&] { run = [&] { return RunFit(fit); }; });

  std::string gap_model;
  CLI::App* gap_cmd = app.add_subcommand("gap", "Stationary distribution and eigen-gap");
  gap_cmd->add_option("--model", gap_model)->required();
  gap_cmd->callback([&] { run = [&] { return RunGap(gap_model); }; });

  ReleaseArgs rel;
  CLI::App* rel_cmd = app.add_subcommand("release", "Noisy count release");
  rel_cmd->add_option("--model", rel.models, "Model JSON (repeatable or comma list)")
      ->required()
      ->delimiter(',');
  rel_cmd->add_option("--data", rel.data, "State CSV of the whole chain")->required();
  rel_cmd->add_option("--query", rel.query, "count:STATE or histogram")->required();
  rel_cmd->add_option("--epsilon", rel.epsilon)->required();
  rel_cmd->add_option("--variant", rel.variant)
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  rel_cmd->add_option("--seed", rel.seed)->capture_default_str();
  rel_cmd->add_option("--ledger", rel.ledger, "Append the record here");
  rel_cmd->add_option("--window", rel.window, "START:END (default: whole chain)");
  rel_cmd->add_flag("--whole-chain", rel.whole_chain,
                    "Protect every node of the chain, not just the window");
  rel_cmd->add_flag("--two-sided-only", rel.two_sided_only,
                    "approx variant: ignore one-sided quilts");
  rel_cmd->callback([&] { run = [&] { return RunRelease(rel); }; });

  ComposeArgs comp;
  double divergence = 0.0;
  CLI::App* comp_cmd = app.add_subcommand("compose", "Compose recorded releases");
  comp_cmd->add_option("--ledger", comp.ledger)->required();
  comp_cmd->add_option("--ids", comp.ids)->required()->delimiter(',');
  comp_cmd->add_option("--rule", comp.rule)
      ->check(CLI::IsMember({"auto", "thm1", "thm2", "thm3", "thm5", "thm6"}))
      ->capture_default_str();
  CLI::Option* e_opt = comp_cmd->add_option(
      "--E", divergence, "Max-divergence bound for thm5 (estimated if omitted)");
  comp_cmd->add_option("--influence", comp.influence,
                       "Boundary influence for thm2: exact or approx")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  comp_cmd->callback([&] {
    if (e_opt->count() > 0) comp.divergence = divergence;
    run = [&] { return RunCompose(comp); };
  });

  CLI::App* verify_cmd = app.add_subcommand("verify", "Exact verification");
  verify_cmd->require_subcommand(1);
  double cx_p = 0.9, cx_q = 0.01;
  CLI::App* cx_cmd = verify_cmd->add_subcommand(
      "counterexample", "Two releases of X1 + X2 exceed twice one release's budget");
  cx_cmd->add_option("--p", cx_p)->capture_default_str();
  cx_cmd->add_option("--q", cx_q)->capture_default_str();
  cx_cmd->callback([&] { run = [&] { return RunCounterexample(cx_p, cx_q); }; });
  SoundnessArgs sound;
  CLI::App* sound_cmd =
      verify_cmd->add_subcommand("soundness", "Oracle check of count releases");
  sound_cmd->add_option("--model", sound.models)->delimiter(',');
  sound_cmd->add_option("--T", sound.horizon)->capture_default_str();
  sound_cmd->add_option("--epsilon", sound.epsilon)
      ->capture_default_str();
  sound_cmd->add_option("--seeds", sound.seeds, "Also check N random chains")
      ->capture_default_str();
  sound_cmd->add_option("--variant", sound.variant)
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  sound_cmd->callback([&] { run = [&] { return RunSoundness(sound); }; });
  int lemma_seeds = 100;
  CLI::App* lemma_cmd =
      verify_cmd->add_subcommand("lemmas", "Influence inequalities on random chains");
  lemma_cmd->add_option("--seeds", lemma_seeds)->capture_default_str();
  lemma_cmd->callback([&] { run = [&] { return RunLemmas(lemma_seeds); }; });

  std::string sim_model, sim_out;
  int sim_length = 0;
  std::uint64_t sim_seed = 0;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Sample a sequence");
  sim_cmd->add_option("--model", sim_model)->required();
  sim_cmd->add_option("--T", sim_length)->required();
  sim_cmd->add_option("--seed", sim_seed)->capture_default_str();
  sim_cmd->add_option("--out", sim_out);
  sim_cmd->callback([&] {
    run = [&] { return RunSimulate(sim_model, sim_length, sim_seed, sim_out); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }
  const absl::Status status = run();
  if (status.ok()) return 0;
  std::cerr << "error: " << status.message() << "\n";
  if (IsDomainError(status) || absl::IsInternal(status)) return kExitDomain;
  return kExitUsage;
}

}  // namespace
}  // namespace quiltguard

int main(int argc, char** argv) { return quiltguard::Main(argc, argv); }
