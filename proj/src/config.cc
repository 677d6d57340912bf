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


#include "dkit/config.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "dkit/error.h"

namespace dkit {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown config key '" + where + "." + k + "'");
  }
}

template <typename T>
void read(const json& j, const std::string& where, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + "." + key + "' has the wrong type");
  }
}

void read_path(const json& j, const char* key, const std::string& base, std::string& out) {
  read(j, "resources", key, out);
  if (!out.empty() && !base.empty() && std::filesystem::path(out).is_relative()) {
    out = (std::filesystem::path(base) / out).lexically_normal().string();
  }
}

}  // namespace

void ToolkitConfig::apply_seed(std::uint64_t s) {
  seed = s;
  lda.seed = s;
  ranker.seed = s;
  selector.seed = s;
}

ToolkitConfig config_from_json(const json& j, const std::string& base_dir) {
  ToolkitConfig cfg;
  check_keys(j, "config",
             {"resources", "csg", "lda", "selector", "ranker", "search", "service", "seed"});
  if (j.contains("resources")) {
    const json& r = j["resources"];
    check_keys(r, "resources",
               {"taxonomy", "taxonomy_format", "topic_model", "embeddings", "frequencies",
                "lexicon", "model", "contextual_cache", "lm_corpus", "search_fixture"});
    auto& p = cfg.resources;
    read_path(r, "taxonomy", base_dir, p.taxonomy);
    read(r, "resources", "taxonomy_format", p.taxonomy_format);
    read_path(r, "topic_model", base_dir, p.topic_model);
    read_path(r, "embeddings", base_dir, p.embeddings);
    read_path(r, "frequencies", base_dir, p.frequencies);
    read_path(r, "lexicon", base_dir, p.lexicon);
    read_path(r, "model", base_dir, p.model);
    read_path(r, "contextual_cache", base_dir, p.contextual_cache);
    read_path(r, "lm_corpus", base_dir, p.lm_corpus);
    read_path(r, "search_fixture", base_dir, p.search_fixture);
  }
  if (j.contains("csg")) {
    const json& c = j["csg"];
    check_keys(c, "csg",
               {"concept_set_size", "m", "top_instances", "prior_smoothing",
                "typicality_smoothing"});
    read(c, "csg", "concept_set_size", cfg.csg.concept_set_size);
    read(c, "csg", "m", cfg.csg.m);
    read(c, "csg", "top_instances", cfg.csg.top_instances);
    read(c, "csg", "prior_smoothing", cfg.csg.prior_smoothing);
    read(c, "csg", "typicality_smoothing", cfg.csg.typicality_smoothing);
  }
  if (j.contains("lda")) {
    const json& l = j["lda"];
    check_keys(l, "lda", {"topics", "iterations", "alpha", "beta"});
    read(l, "lda", "topics", cfg.lda.topics);
    read(l, "lda", "iterations", cfg.lda.iterations);
    read(l, "lda", "alpha", cfg.lda.alpha);
    read(l, "lda", "beta", cfg.lda.beta);
  }
  if (j.contains("selector")) {
    const json& s = j["selector"];
    check_keys(s, "selector", {"csg_top", "pos_pool", "pool_size"});
    read(s, "selector", "csg_top", cfg.selector.csg_top);
    read(s, "selector", "pos_pool", cfg.selector.pos_pool);
    read(s, "selector", "pool_size", cfg.selector.pool_size);
  }
  if (j.contains("ranker")) {
    const json& r = j["ranker"];
    check_keys(r, "ranker", {"kind", "rounds", "learning_rate", "max_leaves", "min_rows_per_leaf"});
    std::string kind(ranker_kind_name(cfg.ranker_kind));
    read(r, "ranker", "kind", kind);
    cfg.ranker_kind = parse_ranker_kind(kind);
    cfg.ranker = default_train_config(cfg.ranker_kind);
    read(r, "ranker", "rounds", cfg.ranker.rounds);
    read(r, "ranker", "learning_rate", cfg.ranker.learning_rate);
    read(r, "ranker", "max_leaves", cfg.ranker.max_leaves);
    read(r, "ranker", "min_rows_per_leaf", cfg.ranker.min_rows_per_leaf);
  }
  if (j.contains("search")) {
    const json& s = j["search"];
    check_keys(s, "search",
               {"endpoint", "key_env", "key_header", "query_param", "result_count",
                "max_requests_per_second", "timeout_seconds"});
    read(s, "search", "endpoint", cfg.search.endpoint);
    read(s, "search", "key_env", cfg.search.key_env);
    read(s, "search", "key_header", cfg.search.key_header);
    read(s, "search", "query_param", cfg.search.query_param);
    read(s, "search", "result_count", cfg.search.result_count);
    read(s, "search", "max_requests_per_second", cfg.search.max_requests_per_second);
    read(s, "search", "timeout_seconds", cfg.search.timeout_seconds);
  }
  if (j.contains("service")) {
    const json& s = j["service"];
    check_keys(s, "service", {"host", "port", "threads", "feedback_log", "compact_every"});
    read(s, "service", "host", cfg.service.host);
    read(s, "service", "port", cfg.service.port);
    read(s, "service", "threads", cfg.service.threads);
    read(s, "service", "feedback_log", cfg.service.feedback_log);
    read(s, "service", "compact_every", cfg.service.compact_every);
    if (!base_dir.empty() && std::filesystem::path(cfg.service.feedback_log).is_relative()) {
      cfg.service.feedback_log =
          (std::filesystem::path(base_dir) / cfg.service.feedback_log).lexically_normal().string();
    }
  }
  std::uint64_t seed = cfg.seed;
  read(j, "config", "seed", seed);
  cfg.apply_seed(seed);
  return cfg;
}

ToolkitConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path().string());
}

json config_to_json(const ToolkitConfig& cfg) {
  const auto& p = cfg.resources;
  return {
      {"resources",
       {{"taxonomy", p.taxonomy},
        {"taxonomy_format", p.taxonomy_format},
        {"topic_model", p.topic_model},
        {"embeddings", p.embeddings},
        {"frequencies", p.frequencies},
        {"lexicon", p.lexicon},
        {"model", p.model},
        {"contextual_cache", p.contextual_cache},
        {"lm_corpus", p.lm_corpus},
        {"search_fixture", p.search_fixture}}},
      {"csg",
       {{"concept_set_size", cfg.csg.concept_set_size},
        {"m", cfg.csg.m},
        {"top_instances", cfg.csg.top_instances},
        {"prior_smoothing", cfg.csg.prior_smoothing},
        {"typicality_smoothing", cfg.csg.typicality_smoothing}}},
      {"lda",
       {{"topics", cfg.lda.topics},
        {"iterations", cfg.lda.iterations},
        {"alpha", cfg.lda.alpha},
        {"beta", cfg.lda.beta}}},
      {"selector",
       {{"csg_top", cfg.selector.csg_top},
        {"pos_pool", cfg.selector.pos_pool},
        {"pool_size", cfg.selector.pool_size}}},
      {"ranker",
       {{"kind", std::string(ranker_kind_name(cfg.ranker_kind))},
        {"rounds", cfg.ranker.rounds},
        {"learning_rate", cfg.ranker.learning_rate},
        {"max_leaves", cfg.ranker.max_leaves},
        {"min_rows_per_leaf", cfg.ranker.min_rows_per_leaf}}},
      {"search",
       {{"endpoint", cfg.search.endpoint},
        {"key_env", cfg.search.key_env},
        {"key_header", cfg.search.key_header},
        {"query_param", cfg.search.query_param},
        {"result_count", cfg.search.result_count},
        {"max_requests_per_second", cfg.search.max_requests_per_second},
        {"timeout_seconds", cfg.search.timeout_seconds}}},
      {"service",
       {{"host", cfg.service.host},
        {"port", cfg.service.port},
        {"threads", cfg.service.threads},
        {"feedback_log", cfg.service.feedback_log},
        {"compact_every", cfg.service.compact_every}}},
      {"seed", cfg.seed},
  };
}

}  // namespace dkit
