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

#include "quiltguard/fit.h"

#include <cmath>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "quiltguard/errors.h"

namespace quiltguard {
namespace {

// Divides counts + alpha by their smoothed total; uniform when that is zero.
std::vector<double> Smooth(const std::vector<double>& counts, double alpha) {
  double total = 0.0;
  for (double c : counts) total += c + alpha;
  std::vector<double> out(counts.size(), 1.0 / counts.size());
  if (total > 0.0) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      out[i] = (counts[i] + alpha) / total;
    }
  }
  return out;
}

}  // namespace

absl::StatusOr<ChainModel> FitChain(
    const std::vector<std::vector<std::string>>& sequences,
    const FitConfig& config,
    const std::optional<std::vector<std::string>>& states) {
  if (!(config.alpha >= 0.0) || std::isinf(config.alpha)) {
    return DomainError(ErrorKind::kOutOfRange,
                       absl::StrCat("smoothing must be finite and >= 0, got ",
                                    config.alpha));
  }
  std::size_t nonempty = 0;
  for (const auto& s : sequences) nonempty += s.empty() ? 0 : 1;
  if (nonempty == 0 || static_cast<int>(nonempty) < config.min_sequences) {
    return DomainError(ErrorKind::kEmptyInput,
                       absl::StrCat(nonempty, " nonempty sequences, need ",
                                    std::max(config.min_sequences, 1)));
  }

  std::vector<std::string> alphabet;
  if (states) {
    alphabet = *states;
  } else {
    std::set<std::string> seen;
    for (const auto& s : sequences) seen.insert(s.begin(), s.end());
    alphabet.assign(seen.begin(), seen.end());
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < alphabet.size(); ++i) index[alphabet[i]] = i;
  if (index.size() != alphabet.size()) {
    return DomainError(ErrorKind::kDuplicateLabel, "state labels must be unique");
  }

  const std::size_t k = alphabet.size();
  std::vector<double> first(k, 0.0);
  std::vector<std::vector<double>> transitions(k, std::vector<double>(k, 0.0));
  for (std::size_t n = 0; n < sequences.size(); ++n) {
    const auto& s = sequences[n];
    std::optional<std::size_t> previous;
    for (std::size_t t = 0; t < s.size(); ++t) {
      auto it = index.find(s[t]);
      if (it == index.end()) {
        return DomainError(ErrorKind::kAlphabetMismatch,
                           absl::StrCat("sequence ", n + 1, " position ", t + 1,
                                        ": label '", s[t],
                                        "' is not in the alphabet"));
      }
      if (previous) {
        transitions[*previous][it->second] += 1.0;
      } else {
        first[it->second] += 1.0;
      }
      previous = it->second;
    }
  }

  std::vector<std::vector<double>> rows;
  for (const auto& counts : transitions) rows.push_back(Smooth(counts, config.alpha));
  return ChainModel::Create(alphabet, Smooth(first, config.alpha),
                            Matrix::FromRows(rows));
}

}  // namespace quiltguard
