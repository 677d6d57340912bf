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

// Candidate set generation.
//
// The key is conceptualized in context: each concept c of the key a gets
//
//   w(c) ∝ p(c|a) · <π, γ_c>
//
// where π is the topic mix of the stem completed by the key and γ_c the topic
// mix of the concept. Instances under the selected concepts are then scored
//
//   p(d) ∝ Σ_c p(d|c) · w(c)
//
// and the key and words occurring in the stem are removed.

#ifndef DKIT_CSG_H_
#define DKIT_CSG_H_

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dkit/kb.h"
#include "dkit/topics.h"

namespace dkit {

struct CsgConfig {
  std::size_t concept_set_size = 20;
  std::size_t m = 30;  // 100 when building training pools
  double prior_smoothing = 0.0;
  double typicality_smoothing = 0.0;
  std::size_t top_instances = 10;  // instances in a concept pseudo-document
  FoldInConfig fold_in;
};

struct WeightedConcept {
  std::string concept_label;
  double weight = 0.0;
};

struct Candidate {
  std::string surface;
  double probability = 0.0;
};

struct CandidateSet {
  std::vector<Candidate> candidates;  // descending probability
  // Set when the key is unknown to the taxonomy or nothing survived the
  // filters; callers may switch to POS-matched sampling.
  bool fallback = false;

  bool empty() const { return candidates.empty(); }
  std::size_t size() const { return candidates.size(); }
};

// Context-weighted concept distribution from explicit priors, sentence topic
// mix and concept topic mixes (gammas[i] belongs to priors[i]). Normalized;
// descending with lexicographic ties. If every topic overlap is zero the
// normalized priors are returned.
std::vector<WeightedConcept> conceptualize(
    const std::vector<ScoredConcept>& priors, const TopicDistribution& pi,
    const std::vector<TopicDistribution>& gammas);

// True when `candidate` must be dropped for (stem, key): it equals the key or
// occurs in the stem (token match, or token-sequence match for multi-word
// candidates). Comparison is case-folded.
bool occurs_in_stem_or_key(std::string_view candidate, std::string_view stem,
                           std::string_view key);

// Typicality-weighted expansion of a concept distribution, filtered, then
// truncated to m and renormalized.
CandidateSet expand_concepts(const Taxonomy& t,
                             const std::vector<WeightedConcept>& concepts,
                             std::string_view stem, std::string_view key,
                             std::size_t m, double typicality_smoothing = 0.0);

// Holds references to immutable resources; safe for concurrent use. Concept
// topic mixes are computed on first use and memoized.
class CandidateGenerator {
 public:
  CandidateGenerator(const Taxonomy& taxonomy, const TopicModel& topics,
                     CsgConfig cfg = {});

  const CsgConfig& config() const { return cfg_; }
  const Taxonomy& taxonomy() const { return taxonomy_; }
  const TopicModel& topic_model() const { return topics_; }

  // nullopt when the key has no concept in the taxonomy.
  std::optional<std::vector<WeightedConcept>> posterior_concepts(
      std::string_view stem, std::string_view key) const;

  CandidateSet generate(std::string_view stem, std::string_view key) const;
  CandidateSet generate(std::string_view stem, std::string_view key,
                        std::size_t m) const;

  TopicDistribution sentence_topics(std::string_view stem,
                                    std::string_view key) const;
  TopicDistribution concept_topics(const std::string& concept_label) const;

 private:
  const Taxonomy& taxonomy_;
  const TopicModel& topics_;
  CsgConfig cfg_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, TopicDistribution> concept_cache_;
};

std::optional<std::vector<WeightedConcept>> posterior_concepts(
    std::string_view stem, std::string_view key, const Taxonomy& t,
    const TopicModel& m, const CsgConfig& cfg = {});

CandidateSet generate_candidates(std::string_view stem, std::string_view key,
                                 const Taxonomy& t, const TopicModel& m,
                                 const CsgConfig& cfg = {});

}  // namespace dkit

#endif  // DKIT_CSG_H_
