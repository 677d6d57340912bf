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


#include "dkit/feedback.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "dkit/error.h"
#include "dkit/text.h"

namespace dkit {
namespace {

using nlohmann::json;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::size_t id_number(const std::string& id) {
  if (id.rfind("fb-", 0) != 0) return 0;
  try {
    return static_cast<std::size_t>(std::stoull(id.substr(3)));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kAccepted:
      return "accepted";
    case Verdict::kRejected:
      return "rejected";
    case Verdict::kEdited:
      return "edited";
  }
  return "accepted";
}

std::optional<Verdict> parse_verdict(std::string_view name) {
  for (auto v : {Verdict::kAccepted, Verdict::kRejected, Verdict::kEdited}) {
    if (verdict_name(v) == name) return v;
  }
  return std::nullopt;
}

void validate_feedback(const FeedbackRecord& r) {
  std::vector<ValidationError::Field> errors;
  if (count_blanks(r.request.stem) != 1) {
    errors.push_back({"request.stem", "must contain exactly one blank marker ____"});
  }
  if (trim(r.request.key).empty()) errors.push_back({"request.key", "must be non-empty"});
  if (trim(r.candidate).empty()) errors.push_back({"candidate", "must be non-empty"});
  if (r.verdict == Verdict::kEdited && trim(r.replacement).empty()) {
    errors.push_back({"replacement", "required when verdict is edited"});
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

FeedbackRecord parse_feedback(const json& j) {
  if (!j.is_object()) {
    throw ValidationError(std::vector<ValidationError::Field>{{"body", "must be a JSON object"}});
  }
  std::vector<ValidationError::Field> errors;
  FeedbackRecord r;
  if (!j.contains("request")) {
    errors.push_back({"request", "required object"});
  } else {
    try {
      r.request = parse_generation_request(j["request"]);
    } catch (const ValidationError& e) {
      for (const auto& f : e.fields()) errors.push_back({"request." + f.field, f.message});
    }
  }
  auto str = [&](const char* key, std::string& out, bool required) {
    if (!j.contains(key) || j[key].is_null()) {
      if (required) errors.push_back({key, "required string"});
      return;
    }
    if (!j[key].is_string()) {
      errors.push_back({key, "must be a string"});
      return;
    }
    out = j[key].get<std::string>();
  };
  str("candidate", r.candidate, true);
  std::string verdict;
  str("verdict", verdict, true);
  if (!verdict.empty()) {
    if (const auto v = parse_verdict(verdict)) {
      r.verdict = *v;
    } else {
      errors.push_back({"verdict", "must be one of accepted, rejected, edited"});
    }
  }
  str("replacement", r.replacement, false);
  str("timestamp", r.timestamp, false);
  str("session_id", r.session_id, false);
  str("id", r.id, false);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  validate_feedback(r);
  return r;
}

json feedback_to_json(const FeedbackRecord& r) {
  json j = {{"id", r.id},
            {"request", request_to_json(r.request)},
            {"candidate", r.candidate},
            {"verdict", std::string(verdict_name(r.verdict))},
            {"timestamp", r.timestamp},
            {"session_id", r.session_id}};
  if (r.verdict == Verdict::kEdited) j["replacement"] = r.replacement;
  return j;
}

FeedbackStore::FeedbackStore(std::string path, std::size_t compact_every)
    : path_(std::move(path)), compact_every_(compact_every) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      FeedbackRecord r = parse_feedback(json::parse(line));
      next_id_ = std::max(next_id_, id_number(r.id) + 1);
      records_.push_back(std::move(r));
    } catch (const std::exception& e) {
      ++skipped_;
      std::cerr << "warning: " << path_ << ":" << lineno << ": skipping feedback record: "
                << e.what() << '\n';
    }
  }
}

std::string FeedbackStore::append(FeedbackRecord record) {
  validate_feedback(record);
  std::lock_guard<std::mutex> lock(mutex_);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fb-%06zu", next_id_);
  record.id = buf;
  if (record.timestamp.empty()) record.timestamp = utc_now();
  {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("io_error", "cannot append to feedback log " + path_);
    out << feedback_to_json(record).dump() << '\n';
    out.flush();
    if (!out) throw Error("io_error", "write to feedback log failed: " + path_);
  }
  ++next_id_;
  records_.push_back(record);
  if (compact_every_ > 0 && ++appends_since_compaction_ >= compact_every_) compact_locked();
  return record.id;
}

std::vector<FeedbackRecord> FeedbackStore::records() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_;
}

std::size_t FeedbackStore::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_.size();
}

std::size_t FeedbackStore::skipped_lines() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return skipped_;
}

void FeedbackStore::compact() {
  std::lock_guard<std::mutex> lock(mutex_);
  compact_locked();
}

void FeedbackStore::compact_locked() {
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error("io_error", "cannot write " + tmp);
    for (const auto& r : records_) out << feedback_to_json(r).dump() << '\n';
    if (!out.flush()) throw Error("io_error", "write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path_);
  appends_since_compaction_ = 0;
  skipped_ = 0;
}

std::string feedback_item_id(std::string_view stem, std::string_view key) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "fb-%016llx",
                static_cast<unsigned long long>(
                    stable_hash(std::string(stem) + "\t" + casefold(key))));
  return buf;
}

std::vector<RankGroup> export_feedback(const std::vector<FeedbackRecord>& records,
                                       const FeedbackFilter& filter,
                                       const FeatureResources& features) {
  struct Pending {
    std::string stem, key;
    std::vector<std::string> order;  // folded surfaces, first appearance
    std::map<std::string, std::pair<std::string, int>> rows;
  };
  std::vector<std::string> group_order;
  std::map<std::string, Pending> groups;
  auto put = [](Pending& p, const std::string& surface, int rel) {
    const std::string f = casefold(trim(surface));
    if (!p.rows.count(f)) p.order.push_back(f);
    p.rows[f] = {trim(surface), rel};
  };
  for (const auto& r : records) {
    if (!filter.session_id.empty() && r.session_id != filter.session_id) continue;
    if (filter.verdict && r.verdict != *filter.verdict) continue;
    const std::string id = feedback_item_id(r.request.stem, r.request.key);
    auto [it, inserted] = groups.try_emplace(id);
    if (inserted) {
      group_order.push_back(id);
      it->second.stem = r.request.stem;
      it->second.key = r.request.key;
    }
    switch (r.verdict) {
      case Verdict::kAccepted:
        put(it->second, r.candidate, 1);
        break;
      case Verdict::kRejected:
        put(it->second, r.candidate, 0);
        break;
      case Verdict::kEdited:
        put(it->second, r.candidate, 0);
        put(it->second, r.replacement, 1);
        break;
    }
  }
  std::vector<RankGroup> out;
  for (const auto& id : group_order) {
    const Pending& p = groups.at(id);
    RankGroup g;
    g.item_id = id;
    for (const auto& f : p.order) {
      const auto& [surface, rel] = p.rows.at(f);
      g.rows.push_back({surface, extract_features(p.stem, p.key, surface, features).values, rel});
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace dkit
