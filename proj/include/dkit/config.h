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


// Toolkit configuration file (JSON). Relative resource paths resolve against
// the directory of the config file. Unknown keys are rejected so that typos
// surface early.
//
// {
//   "resources": {"taxonomy", "taxonomy_format", "topic_model", "embeddings",
//                 "frequencies", "lexicon", "model", "contextual_cache",
//                 "lm_corpus", "search_fixture"},
//   "csg":       {"concept_set_size", "m", "top_instances",
//                 "prior_smoothing", "typicality_smoothing"},
//   "lda":       {"topics", "iterations", "alpha", "beta"},
//   "selector":  {"csg_top", "pos_pool", "pool_size"},
//   "ranker":    {"kind", "rounds", "learning_rate", "max_leaves",
//                 "min_rows_per_leaf"},
//   "search":    {"endpoint", "key_env", "key_header", "query_param",
//                 "result_count", "max_requests_per_second", "timeout_seconds"},
//   "service":   {"host", "port", "threads", "feedback_log", "compact_every"},
//   "seed": 1
// }

#ifndef DKIT_CONFIG_H_
#define DKIT_CONFIG_H_

#include <cstdint>
#include <string>

#include "dkit/csg.h"
#include "dkit/ranker.h"
#include "dkit/search.h"
#include "dkit/selector.h"
#include "dkit/topics.h"
#include "json.hpp"

namespace dkit {

struct ResourcePaths {
  std::string taxonomy;
  std::string taxonomy_format = "hypernym_export";
  std::string topic_model;
  std::string embeddings;
  std::string frequencies;
  std::string lexicon;
  std::string model;
  std::string contextual_cache;
  std::string lm_corpus;
  std::string search_fixture;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  int threads = 8;
  std::string feedback_log = "feedback.jsonl";
  std::size_t compact_every = 1000;
};

struct ToolkitConfig {
  ResourcePaths resources;
  CsgConfig csg;
  LdaConfig lda;
  SelectorConfig selector;
  RankerKind ranker_kind = RankerKind::kLambdaMartListwise;
  TrainConfig ranker = default_train_config(RankerKind::kLambdaMartListwise);
  HttpSearchConfig search;
  ServiceConfig service;
  std::uint64_t seed = 1;

  // Propagates `seed` to the LDA, ranker and selector settings.
  void apply_seed(std::uint64_t s);
};

// Throws ConfigError for unknown keys or wrongly typed values.
ToolkitConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = "");
ToolkitConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ToolkitConfig& cfg);

}  // namespace dkit

#endif  // DKIT_CONFIG_H_
