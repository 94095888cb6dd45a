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

#ifndef QUILTGUARD_LEDGER_H_
#define QUILTGUARD_LEDGER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "quiltguard/mechanism.h"

// Append-only JSON-lines log of releases. Each line is
//   {"id": n, "timestamp": "...", "record": {...}}
// with ids strictly increasing. Appends take an exclusive advisory lock on the
// file, so concurrent writers serialize; readers take none.
//
// Records carry the seed and the noisy output together, which is enough to
// recover the unnoised query value. The ledger belongs to the data curator.

namespace quiltguard {

struct LedgerEntry {
  std::int64_t id = 0;
  std::string timestamp;
  ReleaseRecord record;
};

// A missing file is an empty ledger.
absl::StatusOr<std::vector<LedgerEntry>> ReadLedger(const std::string& path);

// Assigns the next id (also stored in the record) and appends.
absl::StatusOr<LedgerEntry> AppendToLedger(const std::string& path,
                                           ReleaseRecord record);

// Records with the given ids, in the order requested.
absl::StatusOr<std::vector<ReleaseRecord>> SelectRecords(
    std::span<const LedgerEntry> entries, std::span<const std::int64_t> ids);

// Recomputes sigma_max from the stored framework, epsilon, variant and
// options. Fails unless it matches the stored value exactly.
absl::Status ReplayEntry(const LedgerEntry& entry);

}  // namespace quiltguard

#endif  // QUILTGUARD_LEDGER_H_
