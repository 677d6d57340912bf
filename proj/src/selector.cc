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


#include "dkit/selector.h"

#include <algorithm>
#include <iostream>
#include <set>

#include "dkit/error.h"
#include "dkit/pos_tagger.h"
#include "dkit/text.h"

namespace dkit {
namespace {

const PosTagger& tagger_of(const FeatureResources& r) {
  return r.tagger ? *r.tagger : default_pos_tagger();
}

// Key and stem tokens, case-folded.
std::set<std::string> exclusions(std::string_view stem, std::string_view key) {
  std::set<std::string> out{casefold(key)};
  for (auto& t : word_tokens(strip_blank(stem))) out.insert(std::move(t));
  return out;
}

std::vector<std::string> pos_samples(const Taxonomy& t, std::string_view stem,
                                     std::string_view key, std::size_t n,
                                     std::uint64_t seed, const PosTagger& tagger,
                                     const std::set<std::string>& extra) {
  if (n == 0 || !t.has_pos_index()) return {};
  std::set<std::string> exclude = exclusions(stem, key);
  for (const auto& e : extra) exclude.insert(casefold(e));
  const std::string pos = key_pos_in_context(tagger, stem, key);
  return sample_pos_matched(t, pos, n, pos_sample_seed(seed, key), exclude);
}

}  // namespace

std::uint64_t pos_sample_seed(std::uint64_t seed, std::string_view key) {
  return seed ^ stable_hash(casefold(key));
}

std::vector<RankGroup> build_training_groups(const Dataset& dataset,
                                             const CandidateGenerator& csg,
                                             const FeatureResources& features,
                                             const SelectorConfig& cfg,
                                             TrainingSetReport* report) {
  TrainingSetReport local;
  TrainingSetReport& rep = report ? *report : local;
  rep = {};
  std::vector<RankGroup> groups;
  for (const auto& item : dataset.items) {
    ++rep.items;
    std::set<std::string> gold;
    for (const auto& d : item.distractors) gold.insert(casefold(d));

    std::vector<std::string> negatives;
    const CandidateSet cands = csg.generate(item.stem, item.key, cfg.pool_size);
    for (const auto& c : cands.candidates) {
      if (!gold.count(casefold(c.surface))) negatives.push_back(c.surface);
    }
    if (cands.empty()) {
      for (auto& s : pos_samples(csg.taxonomy(), item.stem, item.key, cfg.pool_size,
                                 cfg.seed, tagger_of(features), gold)) {
        negatives.push_back(std::move(s));
      }
    }
    if (cands.empty() && negatives.empty()) {
      ++rep.skipped;
      continue;
    }
    RankGroup g;
    g.item_id = item.id;
    for (const auto& d : item.distractors) {
      g.rows.push_back({d, extract_features(item.stem, item.key, d, features).values, 1});
      ++rep.positives;
    }
    for (const auto& d : negatives) {
      g.rows.push_back({d, extract_features(item.stem, item.key, d, features).values, 0});
      ++rep.negatives;
    }
    groups.push_back(std::move(g));
  }
  rep.groups = groups.size();
  if (rep.skipped > 0) {
    std::cerr << "info: skipped " << rep.skipped << " of " << rep.items
              << " items without candidates\n";
  }
  if (groups.empty()) {
    throw Error("no_training_groups",
                "every item was skipped: no CSG candidates and no POS-matched pool");
  }
  return groups;
}

DistractorSelector::DistractorSelector(const CandidateGenerator& csg,
                                       const RankModel& model,
                                       FeatureResources features,
                                       SelectorConfig cfg)
    : csg_(csg), model_(model), features_(features), cfg_(cfg) {
  if (model.schema_version() != kFeatureSchemaVersion) {
    throw ConfigError("model feature schema " + std::to_string(model.schema_version()) +
                      " does not match extractor schema " +
                      std::to_string(kFeatureSchemaVersion));
  }
  if (model.empty()) throw ConfigError("ranking model has no trees");
}

CandidatePool build_pool(const CandidateGenerator& csg, const PosTagger& tagger,
                         const SelectorConfig& cfg, std::string_view stem,
                         std::string_view key) {
  CandidatePool out;
  std::set<std::string> seen;
  auto push = [&](const std::string& s) {
    if (s.empty() || occurs_in_stem_or_key(s, stem, key)) return;
    if (seen.insert(casefold(s)).second) out.surfaces.push_back(s);
  };
  const CandidateSet cands = csg.generate(stem, key, cfg.csg_top);
  out.fallback = cands.fallback || cands.empty();
  for (const auto& c : cands.candidates) push(c.surface);
  const std::set<std::string> taken = seen;
  for (const auto& s : pos_samples(csg.taxonomy(), stem, key, cfg.pos_pool, cfg.seed, tagger,
                                   taken)) {
    push(s);
  }
  return out;
}

CandidatePool DistractorSelector::pool(std::string_view stem,
                                       std::string_view key) const {
  return build_pool(csg_, tagger_of(features_), cfg_, stem, key);
}

RankedList DistractorSelector::rank_pool(std::string_view stem,
                                         std::string_view key,
                                         const std::vector<std::string>& pool,
                                         std::size_t n,
                                         const FeatureResources& features) const {
  std::vector<std::string> sorted = pool;
  std::sort(sorted.begin(), sorted.end());
  std::vector<RankRow> rows;
  std::set<std::string> seen;
  for (const auto& s : sorted) {
    if (s.empty() || occurs_in_stem_or_key(s, stem, key)) continue;
    if (!seen.insert(casefold(s)).second) continue;
    rows.push_back({s, extract_features(stem, key, s, features).values, 0});
  }
  RankedList out = rank_rows(model_, rows, n);
  out.fallback = out.empty();
  return out;
}

RankedList DistractorSelector::rank(std::string_view stem, std::string_view key,
                                    std::size_t n) const {
  return rank(stem, key, n, features_);
}

RankedList DistractorSelector::rank(std::string_view stem, std::string_view key,
                                    std::size_t n,
                                    const FeatureResources& features) const {
  const CandidatePool p = pool(stem, key);
  RankedList out = rank_pool(stem, key, p.surfaces, n, features);
  out.fallback = out.fallback || p.fallback;
  return out;
}

}  // namespace dkit
