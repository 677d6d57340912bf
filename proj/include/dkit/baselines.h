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


// Unsupervised baseline rankers over an explicit candidate pool.
//
//   ed              ascending edit distance to the key
//   embsim          descending cosine(key, candidate)
//   embsim_cf       embsim after dropping candidates whose center tri-gram in
//                   the completed sentence is frequent in the LM corpus
//   revup           w_cos * cosine + w_dice * char-bigram Dice
//                   + w_lm * exp(mean token log-prob of completed sentence)
//   thesaurus_path  1 / (1 + hops) in the taxonomy, 0 when unreachable

#ifndef DKIT_BASELINES_H_
#define DKIT_BASELINES_H_

#include <string>
#include <string_view>
#include <vector>

#include "dkit/ranker.h"

namespace dkit {

class Embeddings;
class NgramLanguageModel;
class Taxonomy;

enum class BaselineKind { kEd, kEmbSim, kEmbSimCf, kRevup, kThesaurusPath };

std::string_view baseline_name(BaselineKind kind);
BaselineKind parse_baseline(std::string_view name);

struct RevupWeights {
  double cosine = 0.4;
  double dice = 0.3;
  double lm = 0.3;
};

struct BaselineResources {
  const Embeddings* embeddings = nullptr;
  const NgramLanguageModel* lm = nullptr;
  const Taxonomy* taxonomy = nullptr;
  RevupWeights revup;
  std::int64_t trigram_threshold = 1;  // embsim_cf drops counts above this
};

// Dice coefficient of the case-folded character bigram sets.
double char_bigram_dice(std::string_view a, std::string_view b);

// Word tokens of the completed sentence around the candidate: previous
// token (or "<s>"), candidate tokens, next token (or "</s>").
std::vector<std::string> center_ngram(std::string_view stem, std::string_view candidate);

// Throws ConfigError for an empty pool or invalid revup weights and
// MissingResourceError naming the resource a kind needs.
RankedList baseline_rank(BaselineKind kind, std::string_view stem, std::string_view key,
                         const std::vector<std::string>& pool,
                         const BaselineResources& resources);

}  // namespace dkit

#endif  // DKIT_BASELINES_H_
