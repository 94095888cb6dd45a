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

#include "quiltguard/serialization.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "quiltguard/errors.h"

namespace quiltguard {
namespace {

absl::Status ParseError(absl::string_view detail) {
  return DomainError(ErrorKind::kParseError, detail);
}

absl::StatusOr<std::vector<double>> DecodeVector(const Json& json) {
  if (!json.is_array()) return ParseError("expected an array of numbers");
  std::vector<double> out;
  for (const Json& x : json) {
    absl::StatusOr<double> v = DecodeNumber(x);
    if (!v.ok()) return v.status();
    out.push_back(*v);
  }
  return out;
}

Json OptionalInt(const std::optional<int>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<int> ReadOptionalInt(const Json& json, const char* key) {
  if (!json.contains(key) || json.at(key).is_null()) return std::nullopt;
  return json.at(key).get<int>();
}

Json FrameworkToJson(const Framework& framework) {
  Json models = Json::array();
  for (std::size_t i = 0; i < framework.models.size(); ++i) {
    models.push_back({{"name", framework.ModelName(i)},
                      {"model", ModelToJson(framework.models[i])}});
  }
  return {{"horizon", framework.horizon},
          {"window", {{"start", framework.window.start},
                      {"end", framework.window.end}}},
          {"models", models}};
}

absl::StatusOr<Framework> FrameworkFromJson(const Json& json) {
  Framework framework;
  framework.horizon = json.at("horizon").get<int>();
  framework.window = Window{json.at("window").at("start").get<int>(),
                            json.at("window").at("end").get<int>()};
  for (const Json& entry : json.at("models")) {
    absl::StatusOr<ChainModel> model = ModelFromJson(entry.at("model"));
    if (!model.ok()) return model.status();
    framework.models.push_back(*std::move(model));
    framework.model_names.push_back(entry.value("name", ""));
  }
  return framework;
}

Json OptionsToJson(const MechanismOptions& options) {
  return {{"scope", options.scope == NodeScope::kWindow ? "window" : "whole_chain"},
          {"approx_two_sided_only", options.approx_two_sided_only},
          {"search_restriction_threshold", options.search_restriction_threshold},
          {"max_two_sided_offset", options.max_two_sided_offset}};
}

absl::StatusOr<MechanismOptions> OptionsFromJson(const Json& json) {
  MechanismOptions options;
  const std::string scope = json.value("scope", "window");
  if (scope == "window") {
    options.scope = NodeScope::kWindow;
  } else if (scope == "whole_chain") {
    options.scope = NodeScope::kWholeChain;
  } else {
    return ParseError(absl::StrCat("unknown node scope '", scope, "'"));
  }
  options.approx_two_sided_only = json.value("approx_two_sided_only", false);
  options.search_restriction_threshold =
      json.value("search_restriction_threshold", 512);
  options.max_two_sided_offset = json.value("max_two_sided_offset", 64);
  return options;
}

Json ModelQuiltsToJson(const ModelQuilts& quilts) {
  Json nodes = Json::array();
  for (const ActiveQuilt& active : quilts.nodes) {
    Json node = ShapeToJson(active.shape);
    node["score"] = EncodeNumber(active.score);
    node["nearby"] = active.nearby;
    node["influence"] = EncodeNumber(active.influence);
    nodes.push_back(std::move(node));
  }
  return {{"model", quilts.model_name},
          {"sigma_max", EncodeNumber(quilts.sigma_max)},
          {"nodes", nodes}};
}

absl::StatusOr<ModelQuilts> ModelQuiltsFromJson(const Json& json) {
  ModelQuilts quilts;
  quilts.model_name = json.at("model").get<std::string>();
  absl::StatusOr<double> sigma = DecodeNumber(json.at("sigma_max"));
  if (!sigma.ok()) return sigma.status();
  quilts.sigma_max = *sigma;
  for (const Json& node : json.at("nodes")) {
    ActiveQuilt active;
    absl::StatusOr<QuiltShape> shape = ShapeFromJson(node);
    if (!shape.ok()) return shape.status();
    active.shape = *shape;
    absl::StatusOr<double> score = DecodeNumber(node.at("score"));
    if (!score.ok()) return score.status();
    absl::StatusOr<double> influence = DecodeNumber(node.at("influence"));
    if (!influence.ok()) return influence.status();
    active.score = *score;
    active.influence = *influence;
    active.nearby = node.at("nearby").get<int>();
    quilts.nodes.push_back(active);
  }
  return quilts;
}

}  // namespace

Json EncodeNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

absl::StatusOr<double> DecodeNumber(const Json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string& s = value.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  return ParseError(absl::StrCat("expected a number, got ", value.dump()));
}

Json ModelToJson(const ChainModel& model) {
  Json transition = Json::array();
  for (const auto& row : model.transition().ToRows()) transition.push_back(row);
  return {{"states", model.states()},
          {"initial", model.initial()},
          {"transition", transition}};
}

absl::StatusOr<ChainModel> ModelFromJson(const Json& json) {
  try {
    std::vector<std::string> states =
        json.at("states").get<std::vector<std::string>>();
    absl::StatusOr<std::vector<double>> initial = DecodeVector(json.at("initial"));
    if (!initial.ok()) return initial.status();
    std::vector<std::vector<double>> rows;
    for (const Json& row : json.at("transition")) {
      absl::StatusOr<std::vector<double>> r = DecodeVector(row);
      if (!r.ok()) return r.status();
      rows.push_back(*std::move(r));
    }
    for (const auto& row : rows) {
      if (row.size() != states.size()) {
        return DomainError(ErrorKind::kShapeMismatch,
                           "transition rows must have one entry per state");
      }
    }
    Matrix transition = rows.empty() ? Matrix(0, states.size())
                                     : Matrix::FromRows(rows);
    return ChainModel::Create(std::move(states), *std::move(initial),
                              std::move(transition));
  } catch (const Json::exception& e) {
    return ParseError(absl::StrCat("model: ", e.what()));
  }
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return DomainError(ErrorKind::kIoError, absl::StrCat("cannot open ", path));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return DomainError(ErrorKind::kIoError, absl::StrCat("cannot write ", path));
  }
  out << contents;
  out.flush();
  if (!out) {
    return DomainError(ErrorKind::kIoError, absl::StrCat("write failed: ", path));
  }
  return absl::OkStatus();
}

absl::StatusOr<ChainModel> LoadModel(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  Json json = Json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) {
    return ParseError(absl::StrCat(path, " is not valid JSON"));
  }
  return ModelFromJson(json);
}

absl::Status SaveModel(const ChainModel& model, const std::string& path) {
  return WriteFile(path, ModelToJson(model).dump(2) + "\n");
}

absl::StatusOr<std::vector<std::string>> ParseSequenceCsv(absl::string_view text) {
  std::vector<std::string> labels;
  bool seen_header = false;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != "state") {
        return ParseError(
            absl::StrCat("line ", line_number, ": expected header 'state'"));
      }
      seen_header = true;
      continue;
    }
    if (line.find(',') != absl::string_view::npos) {
      return ParseError(absl::StrCat("line ", line_number,
                                     ": expected a single column"));
    }
    labels.emplace_back(line);
  }
  if (!seen_header) return ParseError("missing header 'state'");
  return labels;
}

std::string FormatSequenceCsv(const std::vector<std::string>& labels) {
  std::string out = "state\n";
  for (const std::string& label : labels) absl::StrAppend(&out, label, "\n");
  return out;
}

absl::StatusOr<StateSequence> LabelsToSequence(
    const ChainModel& model, const std::vector<std::string>& labels) {
  StateSequence sequence;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    std::optional<int> index = model.StateIndex(labels[t]);
    if (!index) {
      return DomainError(ErrorKind::kBadState,
                         absl::StrCat("position ", t + 1, ": unknown state '",
                                      labels[t], "'"));
    }
    sequence.values.push_back(*index);
  }
  return sequence;
}

std::vector<std::string> SequenceToLabels(const ChainModel& model,
                                          const StateSequence& sequence) {
  std::vector<std::string> labels;
  for (int v : sequence.values) labels.push_back(model.states()[v]);
  return labels;
}

absl::StatusOr<LipschitzQuery> QueryFromId(absl::string_view id, int num_states) {
  std::pair<absl::string_view, absl::string_view> parts =
      absl::StrSplit(id, absl::MaxSplits(':', 1));
  int state = 0;
  if (parts.first != "count" || !absl::SimpleAtoi(parts.second, &state)) {
    return ParseError(absl::StrCat("unknown query id '", id, "'"));
  }
  return CountStateQuery(state, num_states);
}

Json ShapeToJson(const QuiltShape& shape) {
  return {{"node", shape.node},
          {"left", OptionalInt(shape.left)},
          {"right", OptionalInt(shape.right)}};
}

absl::StatusOr<QuiltShape> ShapeFromJson(const Json& json) {
  try {
    return QuiltShape{json.at("node").get<int>(), ReadOptionalInt(json, "left"),
                      ReadOptionalInt(json, "right")};
  } catch (const Json::exception& e) {
    return ParseError(absl::StrCat("quilt shape: ", e.what()));
  }
}

absl::string_view VariantName(MechanismVariant variant) {
  return variant == MechanismVariant::kExact ? "exact" : "approx";
}

absl::StatusOr<MechanismVariant> ParseVariant(absl::string_view name) {
  if (name == "exact") return MechanismVariant::kExact;
  if (name == "approx") return MechanismVariant::kApprox;
  return ParseError(absl::StrCat("unknown variant '", name, "'"));
}

Json RecordToJson(const ReleaseRecord& record) {
  Json quilts = Json::array();
  for (const ModelQuilts& q : record.active_quilts) {
    quilts.push_back(ModelQuiltsToJson(q));
  }
  return {{"id", record.id},
          {"variant", VariantName(record.variant)},
          {"epsilon", EncodeNumber(record.epsilon)},
          {"sigma_max", EncodeNumber(record.sigma_max)},
          {"output", EncodeNumber(record.output)},
          {"lipschitz_scale", EncodeNumber(record.lipschitz_scale)},
          {"query", record.query_id},
          {"seed", record.seed},
          {"framework", FrameworkToJson(record.framework)},
          {"options", OptionsToJson(record.options)},
          {"active_quilts", quilts}};
}

absl::StatusOr<ReleaseRecord> RecordFromJson(const Json& json) {
  try {
    ReleaseRecord record;
    record.id = json.at("id").get<std::int64_t>();
    absl::StatusOr<MechanismVariant> variant =
        ParseVariant(json.at("variant").get<std::string>());
    if (!variant.ok()) return variant.status();
    record.variant = *variant;
    for (auto [key, field] :
         {std::pair{"epsilon", &record.epsilon},
          std::pair{"sigma_max", &record.sigma_max},
          std::pair{"output", &record.output},
          std::pair{"lipschitz_scale", &record.lipschitz_scale}}) {
      absl::StatusOr<double> v = DecodeNumber(json.at(key));
      if (!v.ok()) return v.status();
      *field = *v;
    }
    record.query_id = json.at("query").get<std::string>();
    record.seed = json.at("seed").get<std::uint64_t>();
    absl::StatusOr<Framework> framework = FrameworkFromJson(json.at("framework"));
    if (!framework.ok()) return framework.status();
    record.framework = *std::move(framework);
    absl::StatusOr<MechanismOptions> options =
        OptionsFromJson(json.value("options", Json::object()));
    if (!options.ok()) return options.status();
    record.options = *options;
    for (const Json& q : json.at("active_quilts")) {
      absl::StatusOr<ModelQuilts> quilts = ModelQuiltsFromJson(q);
      if (!quilts.ok()) return quilts.status();
      record.active_quilts.push_back(*std::move(quilts));
    }
    return record;
  } catch (const Json::exception& e) {
    return ParseError(absl::StrCat("release record: ", e.what()));
  }
}

Json ReportToJson(const CompositionReport& report) {
  Json checks = Json::array();
  for (const ConditionCheck& check : report.checks) {
    checks.push_back({{"name", check.name},
                      {"passed", check.passed},
                      {"evidence", check.evidence}});
  }
  return {{"epsilon", EncodeNumber(report.epsilon)},
          {"finite", report.has_finite_guarantee()},
          {"rule", RuleWireName(report.rule)},
          {"checks", checks},
          {"inputs", report.inputs},
          {"notes", report.notes},
          {"heuristic", report.heuristic}};
}

Json VerificationToJson(const std::vector<VerificationCheck>& checks) {
  Json out = Json::array();
  bool all_passed = true;
  for (const VerificationCheck& check : checks) {
    out.push_back({{"name", check.name},
                   {"bound", EncodeNumber(check.bound)},
                   {"achieved", EncodeNumber(check.achieved)},
                   {"witness", check.witness},
                   {"passed", check.passed}});
    all_passed = all_passed && check.passed;
  }
  return {{"checks", out}, {"passed", all_passed}};
}

}  // namespace quiltguard
