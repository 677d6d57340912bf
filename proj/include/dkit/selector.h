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

// Distractor selection: building training groups from a dataset and ranking
// the inference pool (CSG candidates plus POS-matched samples) for one stem.

#ifndef DKIT_SELECTOR_H_
#define DKIT_SELECTOR_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dkit/corpus.h"
#include "dkit/csg.h"
#include "dkit/features.h"
#include "dkit/ranker.h"

namespace dkit {

struct SelectorConfig {
  std::size_t csg_top = 30;
  std::size_t pos_pool = 30;
  std::size_t pool_size = 100;  // negatives per training item
  std::uint64_t seed = 1;
};

struct TrainingSetReport {
  std::size_t items = 0;
  std::size_t groups = 0;
  std::size_t skipped = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// Seed of the POS-matched sample for one key.
std::uint64_t pos_sample_seed(std::uint64_t seed, std::string_view key);

// Positives are the gold distractors; negatives are the top pool_size CSG
// candidates minus gold (case-folded). When CSG yields nothing and the
// taxonomy has a POS index, pool_size POS-matched samples are used instead;
// otherwise the item is skipped. Throws Error("no_training_groups") when
// every item is skipped.
std::vector<RankGroup> build_training_groups(const Dataset& dataset,
                                             const CandidateGenerator& csg,
                                             const FeatureResources& features,
                                             const SelectorConfig& cfg = {},
                                             TrainingSetReport* report = nullptr);

struct CandidatePool {
  std::vector<std::string> surfaces;  // CSG order first, then POS samples
  bool fallback = false;              // CSG produced nothing usable
};

class PosTagger;

// Inference pool: top csg_top CSG candidates, then pos_pool POS-matched
// samples (when the taxonomy has a POS index). Deduplicated case-folded,
// key and stem tokens removed.
CandidatePool build_pool(const CandidateGenerator& csg, const PosTagger& tagger,
                         const SelectorConfig& cfg, std::string_view stem,
                         std::string_view key);

class DistractorSelector {
 public:
  // Throws ConfigError when the model's feature schema differs from ours.
  DistractorSelector(const CandidateGenerator& csg, const RankModel& model,
                     FeatureResources features, SelectorConfig cfg = {});

  const SelectorConfig& config() const { return cfg_; }
  const RankModel& model() const { return model_; }
  const CandidateGenerator& generator() const { return csg_; }

  // build_pool() with this selector's tagger and config.
  CandidatePool pool(std::string_view stem, std::string_view key) const;

  // Scores an explicit pool; output does not depend on pool order.
  RankedList rank_pool(std::string_view stem, std::string_view key,
                       const std::vector<std::string>& pool, std::size_t n,
                       const FeatureResources& features) const;

  RankedList rank(std::string_view stem, std::string_view key, std::size_t n) const;
  RankedList rank(std::string_view stem, std::string_view key, std::size_t n,
                  const FeatureResources& features) const;

 private:
  const CandidateGenerator& csg_;
  const RankModel& model_;
  FeatureResources features_;
  SelectorConfig cfg_;
};

}  // namespace dkit

#endif  // DKIT_SELECTOR_H_
