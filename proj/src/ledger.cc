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

#include "quiltguard/ledger.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include "absl/strings/string_view.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/time/clock.h"
#include "absl/time/time.h"
#include "quiltguard/errors.h"
#include "quiltguard/serialization.h"

namespace quiltguard {
namespace {

absl::Status IoError(absl::string_view what, const std::string& path) {
  return DomainError(ErrorKind::kIoError, absl::StrCat(what, " ", path, ": ",
                                                       std::strerror(errno)));
}

absl::StatusOr<std::vector<LedgerEntry>> ParseLedger(absl::string_view text) {
  std::vector<LedgerEntry> entries;
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipWhitespace())) {
    ++line_number;
    Json json = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (json.is_discarded() || !json.is_object() || !json.contains("id") ||
        !json.contains("record")) {
      return DomainError(ErrorKind::kParseError,
                         absl::StrCat("ledger line ", line_number, " is malformed"));
    }
    LedgerEntry entry;
    entry.id = json["id"].get<std::int64_t>();
    entry.timestamp = json.value("timestamp", "");
    absl::StatusOr<ReleaseRecord> record = RecordFromJson(json["record"]);
    if (!record.ok()) return record.status();
    entry.record = *std::move(record);
    if (!entries.empty() && entry.id <= entries.back().id) {
      return DomainError(ErrorKind::kParseError,
                         absl::StrCat("ledger ids not increasing at line ",
                                      line_number));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

// Wall-clock time in UTC; a process-local counter when the clock reads before
// the epoch.
std::string Timestamp() {
  static std::atomic<std::int64_t> counter{0};
  const absl::Time now = absl::Now();
  if (now < absl::UnixEpoch()) return absl::StrCat("seq:", ++counter);
  return absl::FormatTime("%Y-%m-%dT%H:%M:%E6SZ", now, absl::UTCTimeZone());
}

class LockedFile {
 public:
  explicit LockedFile(int fd) : fd_(fd) {}
  ~LockedFile() {
    if (fd_ >= 0) {
      flock(fd_, LOCK_UN);
      close(fd_);
    }
  }
  LockedFile(const LockedFile&) = delete;
  LockedFile& operator=(const LockedFile&) = delete;
  int fd() const { return fd_; }

 private:
  int fd_;
};

}  // namespace

absl::StatusOr<std::vector<LedgerEntry>> ReadLedger(const std::string& path) {
  if (access(path.c_str(), F_OK) != 0) return std::vector<LedgerEntry>{};
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseLedger(*text);
}

absl::StatusOr<LedgerEntry> AppendToLedger(const std::string& path,
                                           ReleaseRecord record) {
  const int fd = open(path.c_str(), O_RDWR | O_CREAT | O_APPEND, 0600);
  if (fd < 0) return IoError("cannot open", path);
  LockedFile file(fd);
  if (flock(fd, LOCK_EX) != 0) return IoError("cannot lock", path);

  // Read under the lock so the next id is computed from a stable file.
  std::string text;
  char buffer[1 << 14];
  if (lseek(fd, 0, SEEK_SET) < 0) return IoError("cannot seek", path);
  for (;;) {
    const ssize_t n = read(fd, buffer, sizeof(buffer));
    if (n < 0) return IoError("cannot read", path);
    if (n == 0) break;
    text.append(buffer, static_cast<std::size_t>(n));
  }
  absl::StatusOr<std::vector<LedgerEntry>> entries = ParseLedger(text);
  if (!entries.ok()) return entries.status();

  LedgerEntry entry;
  entry.id = entries->empty() ? 1 : entries->back().id + 1;
  entry.timestamp = Timestamp();
  record.id = entry.id;
  entry.record = std::move(record);

  std::string line = Json{{"id", entry.id},
                          {"timestamp", entry.timestamp},
                          {"record", RecordToJson(entry.record)}}
                         .dump();
  if (!text.empty() && text.back() != '\n') line.insert(line.begin(), '\n');
  line.push_back('\n');
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = write(fd, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      return IoError("cannot append to", path);
    }
    written += static_cast<std::size_t>(n);
  }
  if (fsync(fd) != 0) return IoError("cannot sync", path);
  return entry;
}

absl::StatusOr<std::vector<ReleaseRecord>> SelectRecords(
    std::span<const LedgerEntry> entries, std::span<const std::int64_t> ids) {
  std::vector<ReleaseRecord> out;
  for (std::int64_t id : ids) {
    const LedgerEntry* found = nullptr;
    for (const LedgerEntry& e : entries) {
      if (e.id == id) found = &e;
    }
    if (found == nullptr) {
      return DomainError(ErrorKind::kUnknownRecord,
                         absl::StrCat("no ledger record with id ", id));
    }
    out.push_back(found->record);
  }
  return out;
}

absl::Status ReplayEntry(const LedgerEntry& entry) {
  const ReleaseRecord& r = entry.record;
  absl::StatusOr<NoiseCalibration> calibration =
      CalibrateNoise(r.framework, r.epsilon, r.variant, r.options);
  if (!calibration.ok()) return calibration.status();
  if (calibration->sigma_max != r.sigma_max) {
    return absl::DataLossError(absl::StrFormat(
        "record %d: stored sigma_max %.17g, recomputed %.17g", entry.id,
        r.sigma_max, calibration->sigma_max));
  }
  return absl::OkStatus();
}

}  // namespace quiltguard
