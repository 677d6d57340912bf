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

#include "dkit/csg.h"

#include <algorithm>
#include <set>

#include "dkit/error.h"
#include "dkit/text.h"

namespace dkit {
namespace {

template <typename T, typename Score>
void sort_desc_lexicographic(std::vector<T>& v, Score score,
                             std::string T::*name) {
  std::sort(v.begin(), v.end(), [&](const T& a, const T& b) {
    const double sa = score(a), sb = score(b);
    if (sa != sb) return sa > sb;
    return a.*name < b.*name;
  });
}

}  // namespace

std::vector<WeightedConcept> conceptualize(
    const std::vector<ScoredConcept>& priors, const TopicDistribution& pi,
    const std::vector<TopicDistribution>& gammas) {
  if (priors.size() != gammas.size()) {
    throw ConfigError("one topic distribution per concept required");
  }
  std::vector<WeightedConcept> out;
  out.reserve(priors.size());
  double total = 0.0;
  for (std::size_t i = 0; i < priors.size(); ++i) {
    const double w = priors[i].prior * pi.dot(gammas[i]);
    out.push_back({priors[i].concept_label, w});
    total += w;
  }
  if (!(total > 0.0)) {
    total = 0.0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
      out[i].weight = priors[i].prior;
      total += priors[i].prior;
    }
  }
  if (total > 0.0) {
    for (auto& c : out) c.weight /= total;
  }
  sort_desc_lexicographic(
      out, [](const WeightedConcept& c) { return c.weight; },
      &WeightedConcept::concept_label);
  return out;
}

bool occurs_in_stem_or_key(std::string_view candidate, std::string_view stem,
                           std::string_view key) {
  const auto cand_tokens = word_tokens(candidate);
  const std::string cand = join(cand_tokens, " ");
  if (cand.empty()) return true;
  if (cand == join(word_tokens(key), " ")) return true;
  const auto stem_tokens = word_tokens(strip_blank(stem));
  if (cand_tokens.size() == 1) {
    return std::find(stem_tokens.begin(), stem_tokens.end(), cand) !=
           stem_tokens.end();
  }
  const std::string padded_stem = " " + join(stem_tokens, " ") + " ";
  return padded_stem.find(" " + cand + " ") != std::string::npos;
}

CandidateSet expand_concepts(const Taxonomy& t,
                             const std::vector<WeightedConcept>& concepts,
                             std::string_view stem, std::string_view key,
                             std::size_t m, double typicality_smoothing) {
  if (m == 0) throw ConfigError("m must be >= 1");
  std::map<std::string, double> mass;
  for (const auto& c : concepts) {
    for (const auto& [instance, _] : t.instances_of(c.concept_label)) {
      mass[instance] +=
          typicality(t, instance, c.concept_label, typicality_smoothing) * c.weight;
    }
  }
  CandidateSet out;
  for (const auto& [instance, p] : mass) {
    if (occurs_in_stem_or_key(instance, stem, key)) continue;
    out.candidates.push_back({instance, p});
  }
  sort_desc_lexicographic(
      out.candidates, [](const Candidate& c) { return c.probability; },
      &Candidate::surface);
  if (out.candidates.size() > m) out.candidates.resize(m);
  double total = 0.0;
  for (const auto& c : out.candidates) total += c.probability;
  if (total > 0.0) {
    for (auto& c : out.candidates) c.probability /= total;
  }
  out.fallback = out.candidates.empty();
  return out;
}

CandidateGenerator::CandidateGenerator(const Taxonomy& taxonomy,
                                       const TopicModel& topics, CsgConfig cfg)
    : taxonomy_(taxonomy), topics_(topics), cfg_(std::move(cfg)) {
  if (cfg_.concept_set_size < 1) throw ConfigError("concept_set_size must be >= 1");
  if (cfg_.m < 1) throw ConfigError("m must be >= 1");
}

TopicDistribution CandidateGenerator::sentence_topics(std::string_view stem,
                                                      std::string_view key) const {
  return infer_topics(topics_, topic_tokens(fill_blank(stem, key)), cfg_.fold_in);
}

TopicDistribution CandidateGenerator::concept_topics(
    const std::string& concept_label) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const auto it = concept_cache_.find(concept_label);
    if (it != concept_cache_.end()) return it->second;
  }
  TopicDistribution gamma = concept_topic_distribution(
      topics_, taxonomy_, concept_label, cfg_.top_instances, cfg_.fold_in);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return concept_cache_.emplace(concept_label, std::move(gamma)).first->second;
}

std::optional<std::vector<WeightedConcept>> CandidateGenerator::posterior_concepts(
    std::string_view stem, std::string_view key) const {
  const auto priors = concepts_of(taxonomy_, key, cfg_.concept_set_size,
                                  cfg_.prior_smoothing);
  if (!priors || priors->empty()) return std::nullopt;
  const TopicDistribution pi = sentence_topics(stem, key);
  std::vector<TopicDistribution> gammas;
  gammas.reserve(priors->size());
  for (const auto& c : *priors) gammas.push_back(concept_topics(c.concept_label));
  return conceptualize(*priors, pi, gammas);
}

CandidateSet CandidateGenerator::generate(std::string_view stem,
                                          std::string_view key) const {
  return generate(stem, key, cfg_.m);
}

CandidateSet CandidateGenerator::generate(std::string_view stem,
                                          std::string_view key,
                                          std::size_t m) const {
  const auto concepts = posterior_concepts(stem, key);
  if (!concepts) {
    CandidateSet empty;
    empty.fallback = true;
    return empty;
  }
  return expand_concepts(taxonomy_, *concepts, stem, key, m,
                         cfg_.typicality_smoothing);
}

std::optional<std::vector<WeightedConcept>> posterior_concepts(
    std::string_view stem, std::string_view key, const Taxonomy& t,
    const TopicModel& m, const CsgConfig& cfg) {
  return CandidateGenerator(t, m, cfg).posterior_concepts(stem, key);
}

CandidateSet generate_candidates(std::string_view stem, std::string_view key,
                                 const Taxonomy& t, const TopicModel& m,
                                 const CsgConfig& cfg) {
  return CandidateGenerator(t, m, cfg).generate(stem, key);
}

}  // namespace dkit
