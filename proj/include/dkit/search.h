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

// Web search port used by the reliability feature. Backends return
// {title, snippet} records and may throw dkit::Error on failure.

#ifndef DKIT_SEARCH_H_
#define DKIT_SEARCH_H_

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace dkit {

struct SearchResult {
  std::string title;
  std::string snippet;
};

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  // Must be safe for concurrent calls.
  virtual std::vector<SearchResult> search(const std::string& query) const = 0;
};

// Canned responses keyed by query string; unknown queries return no results.
// File format: {"<query>": [{"title": ..., "snippet": ...}, ...], ...}
class FixtureSearchBackend : public SearchBackend {
 public:
  FixtureSearchBackend() = default;
  explicit FixtureSearchBackend(
      std::map<std::string, std::vector<SearchResult>> responses)
      : responses_(std::move(responses)) {}

  static FixtureSearchBackend load(const std::string& path);
  static FixtureSearchBackend from_json(const nlohmann::json& j);

  void add(const std::string& query, std::vector<SearchResult> results);
  std::vector<SearchResult> search(const std::string& query) const override;

 private:
  std::map<std::string, std::vector<SearchResult>> responses_;
};

// Blocks callers so that consecutive acquisitions are at least
// 1 / max_per_second apart. max_per_second <= 0 disables the ceiling.
class RateLimiter {
 public:
  explicit RateLimiter(double max_per_second) : max_per_second_(max_per_second) {}
  void acquire();

 private:
  double max_per_second_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point next_{};
};

struct HttpSearchConfig {
  std::string endpoint;  // e.g. https://api.example.com/v7.0/search
  std::string key_env = "DKIT_SEARCH_KEY";
  std::string key_header = "Ocp-Apim-Subscription-Key";
  std::string query_param = "q";
  int result_count = 10;
  double max_requests_per_second = 3.0;
  int timeout_seconds = 10;
};

// Live backend. Responses are normalized from either a `webPages.value[]`
// list with {name, snippet} or a `results[]` list with {title, snippet}.
class HttpSearchBackend : public SearchBackend {
 public:
  explicit HttpSearchBackend(HttpSearchConfig cfg);
  std::vector<SearchResult> search(const std::string& query) const override;

 private:
  HttpSearchConfig cfg_;
  std::string api_key_;
  mutable RateLimiter limiter_;
};

// Shared by the live backend and tests.
std::vector<SearchResult> normalize_search_response(const nlohmann::json& body);

}  // namespace dkit

#endif  // DKIT_SEARCH_H_
