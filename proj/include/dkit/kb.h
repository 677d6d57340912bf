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

// Count-based is-A taxonomy. Both Probase-style dumps and WordNet hypernym
// exports load into the same model: (concept, instance) edges weighted by a
// positive co-occurrence or sense-frequency count.

#ifndef DKIT_KB_H_
#define DKIT_KB_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dkit/corpus.h"

namespace dkit {

enum class TaxonomyFormat {
  kCountTsv,        // concept<TAB>instance<TAB>count
  kHypernymExport,  // same, plus optional 4th column POS tag
};

TaxonomyFormat parse_taxonomy_format(std::string_view name);

class Taxonomy {
 public:
  using Counts = std::map<std::string, std::int64_t>;

  // Labels are normalized (lowercase, single inner spaces). Counts for a
  // repeated edge are summed. Throws ConfigError on non-positive counts.
  void add_edge(std::string_view concept_label, std::string_view instance,
                std::int64_t count);
  void add_pos(std::string_view instance, std::string_view tag);

  bool has_concept(std::string_view concept_label) const;
  bool has_instance(std::string_view instance) const;

  std::size_t num_concepts() const { return by_concept_.size(); }
  std::size_t num_instances() const { return by_instance_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  // 0 when the edge does not exist.
  std::int64_t count(std::string_view concept_label, std::string_view instance) const;

  // Instances of a concept with counts; throws UnknownEntryError.
  const Counts& instances_of(std::string_view concept_label) const;
  // Concepts of an instance with counts; throws UnknownEntryError.
  const Counts& concepts_of_instance(std::string_view instance) const;

  const std::map<std::string, Counts>& concepts() const { return by_concept_; }
  const std::map<std::string, Counts>& instances() const { return by_instance_; }

  bool has_pos_index() const { return !pos_.empty(); }
  const std::map<std::string, std::set<std::string>>& pos_index() const {
    return pos_;
  }

 private:
  std::map<std::string, Counts> by_concept_;
  std::map<std::string, Counts> by_instance_;
  std::map<std::string, std::set<std::string>> pos_;
  std::size_t num_edges_ = 0;
};

struct TaxonomyLoadResult {
  Taxonomy taxonomy;
  std::vector<RecordError> diagnostics;  // rejected lines
};

// Rejected records are reported; an empty result throws ParseError.
// In hypernym exports a zero count is floored to 1.
TaxonomyLoadResult load_taxonomy(const std::string& path, TaxonomyFormat format);
TaxonomyLoadResult read_taxonomy(std::istream& in, TaxonomyFormat format,
                                 const std::string& source = "<stream>");

// p(c|a) = (count(c,a) + alpha) / (sum_c' count(c',a) + alpha * |concepts(a)|)
// Throws UnknownEntryError for an unknown instance.
double prior(const Taxonomy& t, std::string_view concept_label,
             std::string_view instance, double alpha = 0.0);

// p(d|c), normalized over the instances of the concept.
// Throws UnknownEntryError for an unknown concept.
double typicality(const Taxonomy& t, std::string_view instance,
                  std::string_view concept_label, double alpha = 0.0);

struct ScoredConcept {
  std::string concept_label;
  double prior = 0.0;
};

// Top-k concepts of an instance by prior, ties by concept string. nullopt
// when the instance is unknown, so callers can fall back.
std::optional<std::vector<ScoredConcept>> concepts_of(
    const Taxonomy& t, std::string_view instance, std::size_t top_k,
    double alpha = 0.0);

// Instances of a concept ordered by typicality (count) descending, ties by
// instance string.
std::vector<std::string> top_instances(const Taxonomy& t,
                                       std::string_view concept_label,
                                       std::size_t limit);

// Distinct instances whose POS tag has the same coarse class as `pos`, none
// in `exclude` (case-folded), deterministic per seed. Throws
// MissingResourceError when the taxonomy has no POS index.
std::vector<std::string> sample_pos_matched(const Taxonomy& t,
                                            std::string_view pos,
                                            std::size_t n, std::uint64_t seed,
                                            const std::set<std::string>& exclude);

// Shortest path length between two labels in the undirected is-A graph
// (siblings are 2 hops apart). nullopt when unreachable or unknown.
std::optional<int> hop_distance(const Taxonomy& t, std::string_view from,
                                std::string_view to);

}  // namespace dkit

#endif  // DKIT_KB_H_
