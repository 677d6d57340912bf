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


#include "dkit/toolkit.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "dkit/error.h"
#include "dkit/text.h"

namespace dkit {
namespace {

using nlohmann::json;

// True when the resource should be loaded. Optional resources whose file
// does not exist are skipped.
bool locate(const std::string& key, const std::string& path, bool needed) {
  if (path.empty()) {
    if (needed) throw MissingResourceError("resources." + key + " (not configured)");
    return false;
  }
  if (!std::filesystem::exists(path)) {
    if (!needed) return false;
    throw MissingResourceError("resources." + key + " (" + path + " not found)");
  }
  return true;
}

}  // namespace

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::unique_ptr<Toolkit> Toolkit::load(const ToolkitConfig& cfg, const ResourceNeeds& needs) {
  std::unique_ptr<Toolkit> tk(new Toolkit());
  tk->cfg_ = cfg;
  const ResourcePaths& p = cfg.resources;

  if (locate("lexicon", p.lexicon, false)) tk->tagger_ = LexiconTagger::from_file(p.lexicon);
  if (locate("taxonomy", p.taxonomy, needs.taxonomy)) {
    auto loaded = load_taxonomy(p.taxonomy, parse_taxonomy_format(p.taxonomy_format));
    tk->taxonomy_ = std::move(loaded.taxonomy);
  }
  if (locate("topic_model", p.topic_model, needs.topic_model)) {
    tk->topics_ = TopicModel::load(p.topic_model);
  }
  if (locate("embeddings", p.embeddings, needs.embeddings)) {
    tk->embeddings_ = Embeddings::load_text(p.embeddings);
  }
  if (locate("frequencies", p.frequencies, false)) {
    tk->frequencies_ = FrequencyTable::load(p.frequencies);
  }
  if (locate("model", p.model, needs.model)) tk->model_ = RankModel::load(p.model);
  if (locate("lm_corpus", p.lm_corpus, needs.lm)) {
    tk->lm_ = train_ngram_lm(read_lines(p.lm_corpus), 3);
  }
  if (!cfg.search.endpoint.empty()) {
    tk->search_ = std::make_unique<HttpSearchBackend>(cfg.search);
  } else if (locate("search_fixture", p.search_fixture, false)) {
    tk->search_ = std::make_unique<FixtureSearchBackend>(FixtureSearchBackend::load(p.search_fixture));
  }
  if (tk->embeddings_) {
    tk->window_embedder_ = std::make_unique<WindowContextualEmbedder>(*tk->embeddings_);
  }
  if (!p.contextual_cache.empty()) {
    tk->contextual_ = std::make_unique<CachedContextualEmbedder>(p.contextual_cache,
                                                                 tk->window_embedder_.get());
  }
  if (tk->taxonomy_ && tk->topics_) {
    tk->generator_ = std::make_unique<CandidateGenerator>(*tk->taxonomy_, *tk->topics_, cfg.csg);
    if (tk->model_) {
      tk->selector_ = std::make_unique<DistractorSelector>(*tk->generator_, *tk->model_,
                                                           tk->features(false), cfg.selector);
    }
  }
  return tk;
}

const CandidateGenerator& Toolkit::generator() const {
  if (!generator_) {
    throw MissingResourceError(!taxonomy_ ? "resources.taxonomy" : "resources.topic_model");
  }
  return *generator_;
}

const DistractorSelector& Toolkit::selector() const {
  if (!selector_) {
    if (!model_) throw MissingResourceError("resources.model");
    generator();
  }
  return *selector_;
}

FeatureResources Toolkit::features(bool use_web_score) const {
  FeatureResources r;
  r.embeddings = embeddings();
  r.contextual = contextual_ ? contextual_.get() : window_embedder_.get();
  r.frequencies = frequencies();
  r.tagger = &tagger_;
  r.search = search_.get();
  r.use_web_score = use_web_score;
  return r;
}

GenerationRequest parse_generation_request(const json& j) {
  std::vector<ValidationError::Field> errors;
  GenerationRequest r;
  if (!j.is_object()) throw ValidationError(std::vector<ValidationError::Field>{{"body", "must be a JSON object"}});
  if (!j.contains("stem") || !j["stem"].is_string()) {
    errors.push_back({"stem", "required string"});
  } else {
    r.stem = j["stem"].get<std::string>();
    if (count_blanks(r.stem) != 1) {
      errors.push_back({"stem", "must contain exactly one blank marker ____"});
    }
  }
  if (!j.contains("key") || !j["key"].is_string()) {
    errors.push_back({"key", "required string"});
  } else {
    r.key = trim(j["key"].get<std::string>());
    if (r.key.empty()) errors.push_back({"key", "must be non-empty"});
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1 ||
        j["n"].get<long long>() > 1000) {
      errors.push_back({"n", "must be an integer in [1, 1000]"});
    } else {
      r.n = j["n"].get<std::size_t>();
    }
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    if (!o.is_object()) {
      errors.push_back({"options", "must be an object"});
    } else {
      if (o.contains("use_web_score")) {
        if (!o["use_web_score"].is_boolean()) {
          errors.push_back({"options.use_web_score", "must be a boolean"});
        } else {
          r.use_web_score = o["use_web_score"].get<bool>();
        }
      }
      if (o.contains("model_id") && !o["model_id"].is_null()) {
        if (!o["model_id"].is_string()) {
          errors.push_back({"options.model_id", "must be a string"});
        } else {
          r.model_id = o["model_id"].get<std::string>();
        }
      }
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return r;
}

json request_to_json(const GenerationRequest& r) {
  json options = {{"use_web_score", r.use_web_score}};
  if (!r.model_id.empty()) options["model_id"] = r.model_id;
  return {{"stem", r.stem}, {"key", r.key}, {"n", r.n}, {"options", options}};
}

json GenerationResponse::body() const {
  json list = json::array();
  for (const auto& d : distractors) {
    list.push_back({{"surface", d.surface}, {"score", d.score}, {"rank", d.rank}});
  }
  return {{"distractors", list}, {"fallback_used", fallback_used}, {"model_id", model_id}};
}

json GenerationResponse::to_json() const {
  json j = body();
  j["timing_ms"] = timing_ms;
  return j;
}

GenerationResponse generate(const Toolkit& toolkit, const GenerationRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  const DistractorSelector& selector = toolkit.selector();
  GenerationResponse out;
  out.model_id = selector.model().model_id();
  if (!request.model_id.empty() && request.model_id != out.model_id) {
    throw UnknownEntryError("model", request.model_id);
  }
  const RankedList list = selector.rank(request.stem, request.key, request.n,
                                        toolkit.features(request.use_web_score));
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    out.distractors.push_back({list.entries[i].surface, list.entries[i].score, i + 1});
  }
  out.fallback_used = list.fallback;
  out.timing_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return out;
}

}  // namespace dkit
