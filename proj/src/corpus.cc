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

#include "dkit/corpus.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dkit/error.h"
#include "dkit/pos_tagger.h"
#include "dkit/random.h"
#include "dkit/text.h"

namespace dkit {

using nlohmann::json;

std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::kScience:
      return "science";
    case Domain::kVocabulary:
      return "vocabulary";
    case Domain::kCommonSense:
      return "common_sense";
    case Domain::kTrivia:
      return "trivia";
    case Domain::kOther:
      return "other";
  }
  return "other";
}

Domain parse_domain(std::string_view name) {
  const std::string n = normalize_label(name);
  if (n == "science") return Domain::kScience;
  if (n == "vocabulary") return Domain::kVocabulary;
  if (n == "common_sense" || n == "common sense" || n == "commonsense")
    return Domain::kCommonSense;
  if (n == "trivia") return Domain::kTrivia;
  if (n == "other") return Domain::kOther;
  throw ParseError("unknown domain '" + std::string(name) + "'");
}

std::string_view split_name(SplitTag s) {
  switch (s) {
    case SplitTag::kTrain:
      return "train";
    case SplitTag::kValid:
      return "valid";
    case SplitTag::kTest:
      return "test";
    case SplitTag::kAll:
      return "all";
  }
  return "all";
}

void validate_item(const ClozeItem& item) {
  if (item.id.empty()) throw ParseError("empty id");
  const std::size_t blanks = count_blanks(item.stem);
  if (blanks != 1) {
    throw ParseError("stem must contain exactly one blank marker, found " +
                     std::to_string(blanks));
  }
  if (split_whitespace(item.key).size() != 1) {
    throw ParseError("key must be a single token: '" + item.key + "'");
  }
  if (item.distractors.empty()) throw ParseError("no distractors");
  const std::string key = casefold(trim(item.key));
  std::unordered_set<std::string> seen;
  for (const auto& d : item.distractors) {
    const std::string folded = casefold(trim(d));
    if (folded.empty()) throw ParseError("empty distractor");
    if (folded == key) throw ParseError("distractor equals key: '" + d + "'");
    if (!seen.insert(folded).second) {
      throw ParseError("duplicate distractor: '" + d + "'");
    }
  }
}

ClozeItem item_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("record is not an object");
  auto need = [&](const char* field) -> const json& {
    const auto it = j.find(field);
    if (it == j.end()) throw ParseError(std::string("missing field '") + field + "'");
    return *it;
  };
  ClozeItem item;
  try {
    const json& id = need("id");
    item.id = id.is_string() ? id.get<std::string>() : id.dump();
    item.domain = parse_domain(need("domain").get<std::string>());
    item.stem = need("stem").get<std::string>();
    item.key = need("key").get<std::string>();
    const json& ds = need("distractors");
    if (!ds.is_array()) throw ParseError("'distractors' must be an array");
    for (const auto& d : ds) item.distractors.push_back(d.get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field type: ") + e.what());
  }
  validate_item(item);
  return item;
}

json item_to_json(const ClozeItem& item) {
  json j;
  j["id"] = item.id;
  j["domain"] = std::string(domain_name(item.domain));
  j["stem"] = item.stem;
  j["key"] = item.key;
  j["distractors"] = item.distractors;
  return j;
}

LoadResult read_dataset(std::istream& in, const std::string& source) {
  LoadResult result;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      ClozeItem item = item_from_json(json::parse(line));
      if (!ids.insert(item.id).second) {
        throw ParseError("duplicate id '" + item.id + "'");
      }
      result.dataset.items.push_back(std::move(item));
    } catch (const json::parse_error& e) {
      result.errors.push_back({lineno, std::string("malformed JSON: ") + e.what()});
    } catch (const ParseError& e) {
      result.errors.push_back({lineno, e.what()});
    }
  }
  if (result.dataset.items.empty()) {
    std::string msg = source + ": no valid records";
    if (!result.errors.empty()) {
      msg += " (first error at line " +
             std::to_string(result.errors.front().line) + ": " +
             result.errors.front().message + ")";
    }
    throw ParseError(msg);
  }
  return result;
}

LoadResult load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset: " + path);
  return read_dataset(in, path);
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  for (const auto& item : dataset.items) out << item_to_json(item).dump() << '\n';
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  write_dataset(dataset, out);
}

std::array<Dataset, 3> split_dataset(const Dataset& dataset,
                                     const SplitRatios& ratios,
                                     std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.valid > 0 && ratios.test > 0)) {
    throw ConfigError("split ratios must be positive");
  }
  if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }
  const std::size_t n = dataset.items.size();
  if (n < 3) throw ConfigError("dataset needs at least 3 items to split");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  shuffle(order, rng);

  // 1e-9 absorbs products like 10 * 0.7 = 7.000000000000001 vs 6.999...
  const auto n_valid =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios.valid + 1e-9));
  const auto n_test =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratios.test + 1e-9));
  const std::size_t n_train = n - n_valid - n_test;

  std::array<Dataset, 3> out;
  out[0].split = SplitTag::kTrain;
  out[1].split = SplitTag::kValid;
  out[2].split = SplitTag::kTest;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t part = i < n_train ? 0 : (i < n_train + n_valid ? 1 : 2);
    out[part].items.push_back(dataset.items[order[i]]);
  }
  return out;
}

std::string key_pos_in_context(const PosTagger& tagger, std::string_view stem,
                               std::string_view key) {
  const std::size_t pos = stem.find(kBlank);
  std::vector<std::string> tokens;
  std::size_t key_last = 0;
  if (pos == std::string_view::npos) {
    tokens = tokenize_words(key);
    key_last = tokens.empty() ? 0 : tokens.size() - 1;
  } else {
    tokens = tokenize_words(stem.substr(0, pos));
    const auto key_tokens = tokenize_words(key);
    tokens.insert(tokens.end(), key_tokens.begin(), key_tokens.end());
    key_last = tokens.empty() ? 0 : tokens.size() - 1;
    const auto rest = tokenize_words(stem.substr(pos + kBlank.size()));
    tokens.insert(tokens.end(), rest.begin(), rest.end());
  }
  if (tokens.empty()) return "NN";
  return tagger.tag(tokens)[key_last];
}

StatsReport dataset_stats(const Dataset& dataset, const PosTagger* tagger) {
  if (dataset.items.empty()) throw ConfigError("empty dataset");
  StatsReport report;
  report.total = dataset.items.size();
  std::map<Domain, std::size_t> distractor_sums;
  std::size_t all = 0;
  for (const auto& item : dataset.items) {
    report.per_domain[item.domain].items += 1;
    distractor_sums[item.domain] += item.distractors.size();
    all += item.distractors.size();
    if (tagger) report.key_pos[key_pos_in_context(*tagger, item.stem, item.key)] += 1;
  }
  report.mean_distractors =
      static_cast<double>(all) / static_cast<double>(report.total);
  for (auto& [domain, stats] : report.per_domain) {
    stats.mean_distractors = static_cast<double>(distractor_sums[domain]) /
                             static_cast<double>(stats.items);
  }
  return report;
}

namespace {
double round2(double x) { return std::round(x * 100.0) / 100.0; }
}  // namespace

json StatsReport::to_json() const {
  json j;
  j["total"] = total;
  j["mean_distractors"] = round2(mean_distractors);
  json domains = json::object();
  for (const auto& [domain, stats] : per_domain) {
    domains[std::string(domain_name(domain))] = {
        {"items", stats.items},
        {"mean_distractors", round2(stats.mean_distractors)}};
  }
  j["domains"] = domains;
  json pos = json::object();
  for (const auto& [tag, count] : key_pos) pos[tag] = count;
  j["key_pos"] = pos;
  return j;
}

std::string StatsReport::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << std::left << std::setw(14) << "domain" << std::right << std::setw(8)
     << "items" << std::setw(14) << "distractors" << '\n';
  for (const auto& [domain, stats] : per_domain) {
    os << std::left << std::setw(14) << domain_name(domain) << std::right
       << std::setw(8) << stats.items << std::setw(14) << stats.mean_distractors
       << '\n';
  }
  os << std::left << std::setw(14) << "total" << std::right << std::setw(8)
     << total << std::setw(14) << mean_distractors << '\n';
  if (!key_pos.empty()) {
    os << "key POS:";
    for (const auto& [tag, count] : key_pos) os << ' ' << tag << '=' << count;
    os << '\n';
  }
  return os.str();
}

}  // namespace dkit
