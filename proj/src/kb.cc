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

#include "dkit/kb.h"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <unordered_map>

#include "dkit/error.h"
#include "dkit/pos_tagger.h"
#include "dkit/random.h"
#include "dkit/text.h"

namespace dkit {

TaxonomyFormat parse_taxonomy_format(std::string_view name) {
  if (name == "count_tsv") return TaxonomyFormat::kCountTsv;
  if (name == "hypernym_export") return TaxonomyFormat::kHypernymExport;
  throw ConfigError("unknown taxonomy format '" + std::string(name) + "'");
}

void Taxonomy::add_edge(std::string_view concept_label, std::string_view instance,
                        std::int64_t count) {
  if (count <= 0) {
    throw ConfigError("edge count must be positive, got " + std::to_string(count));
  }
  const std::string c = normalize_label(concept_label);
  const std::string i = normalize_label(instance);
  if (c.empty() || i.empty()) throw ConfigError("empty concept or instance label");
  auto& slot = by_concept_[c][i];
  if (slot == 0) ++num_edges_;
  slot += count;
  by_instance_[i][c] += count;
}

void Taxonomy::add_pos(std::string_view instance, std::string_view tag) {
  pos_[normalize_label(instance)].insert(std::string(trim(tag)));
}

bool Taxonomy::has_concept(std::string_view concept_label) const {
  return by_concept_.count(normalize_label(concept_label)) > 0;
}

bool Taxonomy::has_instance(std::string_view instance) const {
  return by_instance_.count(normalize_label(instance)) > 0;
}

std::int64_t Taxonomy::count(std::string_view concept_label,
                             std::string_view instance) const {
  const auto it = by_concept_.find(normalize_label(concept_label));
  if (it == by_concept_.end()) return 0;
  const auto jt = it->second.find(normalize_label(instance));
  return jt == it->second.end() ? 0 : jt->second;
}

const Taxonomy::Counts& Taxonomy::instances_of(std::string_view concept_label) const {
  const auto it = by_concept_.find(normalize_label(concept_label));
  if (it == by_concept_.end()) {
    throw UnknownEntryError("concept", std::string(concept_label));
  }
  return it->second;
}

const Taxonomy::Counts& Taxonomy::concepts_of_instance(
    std::string_view instance) const {
  const auto it = by_instance_.find(normalize_label(instance));
  if (it == by_instance_.end()) {
    throw UnknownEntryError("instance", std::string(instance));
  }
  return it->second;
}

TaxonomyLoadResult read_taxonomy(std::istream& in, TaxonomyFormat format,
                                 const std::string& source) {
  TaxonomyLoadResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto cols = split(line, '\t');
    const bool export_format = format == TaxonomyFormat::kHypernymExport;
    if (cols.size() != 3 && !(export_format && cols.size() == 4)) {
      result.diagnostics.push_back(
          {lineno, "expected " +
                       std::string(export_format ? "3 or 4" : "3") +
                       " tab-separated columns, got " +
                       std::to_string(cols.size())});
      continue;
    }
    const std::string count_text = trim(cols[2]);
    std::int64_t count = 0;
    const auto [ptr, ec] = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size()) {
      result.diagnostics.push_back({lineno, "bad count '" + count_text + "'"});
      continue;
    }
    if (export_format && count == 0) count = 1;  // Laplace floor
    if (count <= 0) {
      result.diagnostics.push_back(
          {lineno, "non-positive count " + std::to_string(count)});
      continue;
    }
    try {
      result.taxonomy.add_edge(cols[0], cols[1], count);
    } catch (const ConfigError& e) {
      result.diagnostics.push_back({lineno, e.what()});
      continue;
    }
    if (export_format && cols.size() == 4 && !trim(cols[3]).empty()) {
      result.taxonomy.add_pos(cols[1], trim(cols[3]));
    }
  }
  if (result.taxonomy.num_edges() == 0) {
    throw ParseError(source + ": taxonomy has no valid edges");
  }
  return result;
}

TaxonomyLoadResult load_taxonomy(const std::string& path, TaxonomyFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open taxonomy: " + path);
  return read_taxonomy(in, format, path);
}

namespace {

double smoothed_ratio(std::int64_t count, const Taxonomy::Counts& row,
                      double alpha) {
  std::int64_t total = 0;
  for (const auto& [_, c] : row) total += c;
  const double denom =
      static_cast<double>(total) + alpha * static_cast<double>(row.size());
  return (static_cast<double>(count) + alpha) / denom;
}

}  // namespace

double prior(const Taxonomy& t, std::string_view concept_label,
             std::string_view instance, double alpha) {
  if (alpha < 0) throw ConfigError("smoothing must be >= 0");
  const auto& row = t.concepts_of_instance(instance);
  const auto it = row.find(normalize_label(concept_label));
  return smoothed_ratio(it == row.end() ? 0 : it->second, row, alpha);
}

double typicality(const Taxonomy& t, std::string_view instance,
                  std::string_view concept_label, double alpha) {
  if (alpha < 0) throw ConfigError("smoothing must be >= 0");
  const auto& row = t.instances_of(concept_label);
  const auto it = row.find(normalize_label(instance));
  return smoothed_ratio(it == row.end() ? 0 : it->second, row, alpha);
}

std::optional<std::vector<ScoredConcept>> concepts_of(
    const Taxonomy& t, std::string_view instance, std::size_t top_k,
    double alpha) {
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
  if (!t.has_instance(instance)) return std::nullopt;
  const auto& row = t.concepts_of_instance(instance);
  std::vector<ScoredConcept> out;
  out.reserve(row.size());
  for (const auto& [concept_label, count] : row) {
    out.push_back({concept_label, smoothed_ratio(count, row, alpha)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredConcept& a, const ScoredConcept& b) {
                     if (a.prior != b.prior) return a.prior > b.prior;
                     return a.concept_label < b.concept_label;
                   });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

std::vector<std::string> top_instances(const Taxonomy& t,
                                       std::string_view concept_label,
                                       std::size_t limit) {
  const auto& row = t.instances_of(concept_label);
  std::vector<std::pair<std::string, std::int64_t>> items(row.begin(), row.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    out.push_back(items[i].first);
  }
  return out;
}

std::vector<std::string> sample_pos_matched(const Taxonomy& t,
                                            std::string_view pos,
                                            std::size_t n, std::uint64_t seed,
                                            const std::set<std::string>& exclude) {
  if (!t.has_pos_index()) throw MissingResourceError("taxonomy POS index");
  const std::string wanted = coarse_tag(pos);
  std::set<std::string> folded_exclude;
  for (const auto& e : exclude) folded_exclude.insert(normalize_label(e));

  std::vector<std::string> pool;  // sorted, from the ordered map
  for (const auto& [instance, tags] : t.pos_index()) {
    if (folded_exclude.count(instance)) continue;
    for (const auto& tag : tags) {
      if (coarse_tag(tag) == wanted) {
        pool.push_back(instance);
        break;
      }
    }
  }
  // Partial Fisher-Yates: first n slots are the sample.
  Rng rng(seed);
  const std::size_t take = std::min(n, pool.size());
  for (std::size_t i = 0; i < take; ++i) {
    std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
  }
  pool.resize(take);
  return pool;
}

std::optional<int> hop_distance(const Taxonomy& t, std::string_view from,
                                std::string_view to) {
  const std::string src = normalize_label(from);
  const std::string dst = normalize_label(to);
  auto known = [&](const std::string& s) {
    return t.concepts().count(s) || t.instances().count(s);
  };
  if (!known(src) || !known(dst)) return std::nullopt;
  if (src == dst) return 0;
  std::unordered_map<std::string, int> dist{{src, 0}};
  std::deque<std::string> queue{src};
  while (!queue.empty()) {
    const std::string node = queue.front();
    queue.pop_front();
    const int d = dist[node];
    auto visit = [&](const Taxonomy::Counts& neighbours) -> bool {
      for (const auto& [next, _] : neighbours) {
        if (dist.emplace(next, d + 1).second) {
          if (next == dst) return true;
          queue.push_back(next);
        }
      }
      return false;
    };
    if (const auto it = t.concepts().find(node); it != t.concepts().end()) {
      if (visit(it->second)) return d + 1;
    }
    if (const auto it = t.instances().find(node); it != t.instances().end()) {
      if (visit(it->second)) return d + 1;
    }
  }
  return std::nullopt;
}

}  // namespace dkit
