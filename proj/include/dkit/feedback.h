/*
 * Copyright 2026 The dkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Append-only feedback log (one JSON record per line) and its export to the
// ranker's training-group format.

#ifndef DKIT_FEEDBACK_H_
#define DKIT_FEEDBACK_H_

#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dkit/features.h"
#include "dkit/ranker.h"
#include "dkit/toolkit.h"
#include "json.hpp"

namespace dkit {

enum class Verdict { kAccepted, kRejected, kEdited };

std::string_view verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view name);

struct FeedbackRecord {
  std::string id;  // assigned by the store
  GenerationRequest request;
  std::string candidate;
  Verdict verdict = Verdict::kAccepted;
  std::string replacement;  // required when edited
  std::string timestamp;    // ISO-8601 UTC; assigned when empty
  std::string session_id;
};

// Throws ValidationError with field-level messages.
FeedbackRecord parse_feedback(const nlohmann::json& j);
void validate_feedback(const FeedbackRecord& r);
nlohmann::json feedback_to_json(const FeedbackRecord& r);

// Single writer: appends are serialized under a mutex. Existing records are
// read on construction; unreadable lines (e.g. a torn final write) are
// skipped and dropped at the next compaction.
class FeedbackStore {
 public:
  explicit FeedbackStore(std::string path, std::size_t compact_every = 1000);

  // Validates, assigns id and timestamp, persists; returns the id.
  std::string append(FeedbackRecord record);
  std::vector<FeedbackRecord> records() const;
  std::size_t size() const;
  std::size_t skipped_lines() const;
  const std::string& path() const { return path_; }

  // Rewrites the log with one canonical line per record (atomic rename).
  void compact();

 private:
  void compact_locked();

  std::string path_;
  std::size_t compact_every_;
  std::size_t appends_since_compaction_ = 0;
  std::size_t skipped_ = 0;
  std::size_t next_id_ = 1;
  mutable std::mutex mutex_;
  std::vector<FeedbackRecord> records_;
};

struct FeedbackFilter {
  std::string session_id;          // empty: any
  std::optional<Verdict> verdict;  // nullopt: any
};

// Group id of a (stem, key) pair in exported training groups.
std::string feedback_item_id(std::string_view stem, std::string_view key);

// accepted -> relevance 1, rejected -> 0; an edit yields the replacement
// at 1 and the original candidate at 0. The last verdict on a surface wins.
// Groups and rows keep first-appearance order.
std::vector<RankGroup> export_feedback(const std::vector<FeedbackRecord>& records,
                                       const FeedbackFilter& filter,
                                       const FeatureResources& features);

}  // namespace dkit

#endif  // DKIT_FEEDBACK_H_
