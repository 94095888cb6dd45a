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

#ifndef QUILTGUARD_SERIALIZATION_H_
#define QUILTGUARD_SERIALIZATION_H_

#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "quiltguard/chain.h"
#include "quiltguard/composition.h"
#include "quiltguard/mechanism.h"
#include "quiltguard/oracle.h"

namespace quiltguard {

using Json = nlohmann::ordered_json;

// Non-finite values are written as the strings "inf", "-inf" and "nan".
Json EncodeNumber(double value);
absl::StatusOr<double> DecodeNumber(const Json& value);

// {"states": [...], "initial": [...], "transition": [[...], ...]}
Json ModelToJson(const ChainModel& model);
absl::StatusOr<ChainModel> ModelFromJson(const Json& json);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

absl::StatusOr<ChainModel> LoadModel(const std::string& path);
absl::Status SaveModel(const ChainModel& model, const std::string& path);

// One label per line under a `state` header. Blank lines are ignored.
absl::StatusOr<std::vector<std::string>> ParseSequenceCsv(absl::string_view text);
std::string FormatSequenceCsv(const std::vector<std::string>& labels);

absl::StatusOr<StateSequence> LabelsToSequence(
    const ChainModel& model, const std::vector<std::string>& labels);
std::vector<std::string> SequenceToLabels(const ChainModel& model,
                                          const StateSequence& sequence);

// Rebuilds the query named by a record's query id ("count:<index>").
absl::StatusOr<LipschitzQuery> QueryFromId(absl::string_view id, int num_states);

Json ShapeToJson(const QuiltShape& shape);
absl::StatusOr<QuiltShape> ShapeFromJson(const Json& json);

Json RecordToJson(const ReleaseRecord& record);
absl::StatusOr<ReleaseRecord> RecordFromJson(const Json& json);

Json ReportToJson(const CompositionReport& report);
Json VerificationToJson(const std::vector<VerificationCheck>& checks);

absl::string_view VariantName(MechanismVariant variant);
absl::StatusOr<MechanismVariant> ParseVariant(absl::string_view name);

}  // namespace quiltguard

#endif  // QUILTGUARD_SERIALIZATION_H_
