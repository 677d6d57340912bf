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

// Cloze-style MCQ datasets: one JSON object per line with fields
// `id`, `domain`, `stem`, `key`, `distractors`.

#ifndef DKIT_CORPUS_H_
#define DKIT_CORPUS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dkit {

class PosTagger;

enum class Domain { kScience, kVocabulary, kCommonSense, kTrivia, kOther };

inline constexpr std::array<Domain, 5> kAllDomains = {
    Domain::kScience, Domain::kVocabulary, Domain::kCommonSense,
    Domain::kTrivia, Domain::kOther};

std::string_view domain_name(Domain d);
// Accepts the canonical names plus "common sense" / "commonsense".
Domain parse_domain(std::string_view name);

enum class SplitTag { kTrain, kValid, kTest, kAll };

std::string_view split_name(SplitTag s);

struct ClozeItem {
  std::string id;
  Domain domain = Domain::kOther;
  std::string stem;  // exactly one "____"
  std::string key;
  std::vector<std::string> distractors;  // gold set
};

// Throws ParseError describing the first violated invariant.
void validate_item(const ClozeItem& item);

ClozeItem item_from_json(const nlohmann::json& j);
nlohmann::json item_to_json(const ClozeItem& item);

struct Dataset {
  std::vector<ClozeItem> items;
  SplitTag split = SplitTag::kAll;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

struct RecordError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  Dataset dataset;
  std::vector<RecordError> errors;
};

// Invalid records are skipped and reported with their line number; a file
// without any valid record throws ParseError.
LoadResult load_dataset(const std::string& path);
LoadResult read_dataset(std::istream& in, const std::string& source = "<stream>");

void write_dataset(const Dataset& dataset, std::ostream& out);
void save_dataset(const Dataset& dataset, const std::string& path);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

// Seeded shuffle, then floor-allocated valid/test sizes with the remainder
// going to train. Returns {train, valid, test}.
std::array<Dataset, 3> split_dataset(const Dataset& dataset,
                                     const SplitRatios& ratios,
                                     std::uint64_t seed);

struct DomainStats {
  std::size_t items = 0;
  double mean_distractors = 0.0;
};

struct StatsReport {
  std::size_t total = 0;
  double mean_distractors = 0.0;
  std::map<Domain, DomainStats> per_domain;
  std::map<std::string, std::size_t> key_pos;  // empty without a tagger

  nlohmann::json to_json() const;
  std::string to_text() const;
};

// Key POS is the tag of the key inside its completed sentence.
StatsReport dataset_stats(const Dataset& dataset,
                          const PosTagger* tagger = nullptr);

// Tag of `key` within the stem completed by it.
std::string key_pos_in_context(const PosTagger& tagger, std::string_view stem,
                               std::string_view key);

}  // namespace dkit

#endif  // DKIT_CORPUS_H_
