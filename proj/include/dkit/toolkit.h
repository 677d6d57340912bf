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


// Loaded resources shared by the CLI and the HTTP service, plus the
// generation request/response contract.

#ifndef DKIT_TOOLKIT_H_
#define DKIT_TOOLKIT_H_

#include <memory>
#include <optional>
#include <string>

#include "dkit/config.h"
#include "dkit/csg.h"
#include "dkit/embeddings.h"
#include "dkit/features.h"
#include "dkit/kb.h"
#include "dkit/ngram_lm.h"
#include "dkit/pos_tagger.h"
#include "dkit/ranker.h"
#include "dkit/search.h"
#include "dkit/selector.h"
#include "dkit/topics.h"
#include "json.hpp"

namespace dkit {

struct ResourceNeeds {
  bool taxonomy = false;
  bool topic_model = false;
  bool embeddings = false;
  bool model = false;
  bool lm = false;
};

// Immutable after load; safe to share across threads.
class Toolkit {
 public:
  // Required resources that are unconfigured or unreadable raise
  // MissingResourceError naming the config key and path. Optional resources
  // are loaded when configured.
  static std::unique_ptr<Toolkit> load(const ToolkitConfig& cfg, const ResourceNeeds& needs);

  const ToolkitConfig& config() const { return cfg_; }
  const Taxonomy* taxonomy() const { return taxonomy_ ? &*taxonomy_ : nullptr; }
  const TopicModel* topic_model() const { return topics_ ? &*topics_ : nullptr; }
  const Embeddings* embeddings() const { return embeddings_ ? &*embeddings_ : nullptr; }
  const FrequencyTable* frequencies() const { return frequencies_ ? &*frequencies_ : nullptr; }
  const RankModel* model() const { return model_ ? &*model_ : nullptr; }
  const NgramLanguageModel* language_model() const { return lm_ ? &*lm_ : nullptr; }
  const SearchBackend* search() const { return search_.get(); }
  const PosTagger& tagger() const { return tagger_; }

  // Throw MissingResourceError when the underlying resources are absent.
  const CandidateGenerator& generator() const;
  const DistractorSelector& selector() const;

  FeatureResources features(bool use_web_score = false) const;

 private:
  Toolkit() = default;

  ToolkitConfig cfg_;
  std::optional<Taxonomy> taxonomy_;
  std::optional<TopicModel> topics_;
  std::optional<Embeddings> embeddings_;
  std::optional<FrequencyTable> frequencies_;
  std::optional<RankModel> model_;
  std::optional<NgramLanguageModel> lm_;
  LexiconTagger tagger_;
  std::unique_ptr<SearchBackend> search_;
  std::unique_ptr<ContextualEmbedder> window_embedder_;
  std::unique_ptr<ContextualEmbedder> contextual_;
  std::unique_ptr<CandidateGenerator> generator_;
  std::unique_ptr<DistractorSelector> selector_;
};

// Reads one line per document.
std::vector<std::string> read_lines(const std::string& path);

struct GenerationRequest {
  std::string stem;
  std::string key;
  std::size_t n = 3;
  bool use_web_score = false;
  std::string model_id;  // empty: the loaded model
};

// Throws ValidationError listing every offending field.
GenerationRequest parse_generation_request(const nlohmann::json& j);
nlohmann::json request_to_json(const GenerationRequest& r);

struct GeneratedDistractor {
  std::string surface;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct GenerationResponse {
  std::vector<GeneratedDistractor> distractors;
  bool fallback_used = false;
  std::string model_id;
  double timing_ms = 0.0;

  // Deterministic part of the response.
  nlohmann::json body() const;
  // body() plus timing_ms.
  nlohmann::json to_json() const;
};

// Throws UnknownEntryError("model") when the request names another model.
GenerationResponse generate(const Toolkit& toolkit, const GenerationRequest& request);

}  // namespace dkit

#endif  // DKIT_TOOLKIT_H_
