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

#include "dkit/search.h"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "dkit/error.h"
#include "dkit/text.h"
#include "httplib.h"

namespace dkit {

using nlohmann::json;

FixtureSearchBackend FixtureSearchBackend::from_json(const json& j) {
  if (!j.is_object()) throw ParseError("search fixture must be an object");
  FixtureSearchBackend backend;
  for (const auto& [query, list] : j.items()) {
    std::vector<SearchResult> results;
    if (!list.is_array()) {
      throw ParseError("search fixture entry for '" + query + "' is not an array");
    }
    for (const auto& r : list) {
      results.push_back({r.value("title", std::string()),
                         r.value("snippet", std::string())});
    }
    backend.add(query, std::move(results));
  }
  return backend;
}

FixtureSearchBackend FixtureSearchBackend::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open search fixture: " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void FixtureSearchBackend::add(const std::string& query,
                               std::vector<SearchResult> results) {
  responses_[query] = std::move(results);
}

std::vector<SearchResult> FixtureSearchBackend::search(
    const std::string& query) const {
  if (const auto it = responses_.find(query); it != responses_.end()) {
    return it->second;
  }
  // Whitespace-insensitive second chance.
  const std::string normalized = join(split_whitespace(query), " ");
  for (const auto& [q, results] : responses_) {
    if (join(split_whitespace(q), " ") == normalized) return results;
  }
  return {};
}

void RateLimiter::acquire() {
  if (max_per_second_ <= 0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / max_per_second_));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval;
  }
  std::this_thread::sleep_until(slot);
}

std::vector<SearchResult> normalize_search_response(const json& body) {
  std::vector<SearchResult> out;
  if (body.contains("webPages") && body["webPages"].contains("value")) {
    for (const auto& r : body["webPages"]["value"]) {
      out.push_back({r.value("name", std::string()), r.value("snippet", std::string())});
    }
  } else if (body.contains("results") && body["results"].is_array()) {
    for (const auto& r : body["results"]) {
      out.push_back({r.value("title", std::string()), r.value("snippet", std::string())});
    }
  }
  return out;
}

HttpSearchBackend::HttpSearchBackend(HttpSearchConfig cfg)
    : cfg_(std::move(cfg)), limiter_(cfg_.max_requests_per_second) {
  if (cfg_.endpoint.empty()) throw MissingResourceError("search endpoint");
  if (!cfg_.key_env.empty()) {
    if (const char* key = std::getenv(cfg_.key_env.c_str())) api_key_ = key;
  }
}

std::vector<SearchResult> HttpSearchBackend::search(const std::string& query) const {
  const std::size_t scheme = cfg_.endpoint.find("://");
  const std::size_t path_start =
      cfg_.endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  const std::string host = cfg_.endpoint.substr(0, path_start);
  const std::string path =
      path_start == std::string::npos ? "/" : cfg_.endpoint.substr(path_start);

  limiter_.acquire();
  httplib::Client client(host);
  client.set_connection_timeout(cfg_.timeout_seconds);
  client.set_read_timeout(cfg_.timeout_seconds);
  httplib::Headers headers;
  if (!api_key_.empty() && !cfg_.key_header.empty()) {
    headers.emplace(cfg_.key_header, api_key_);
  }
  httplib::Params params{{cfg_.query_param, query},
                         {"count", std::to_string(cfg_.result_count)}};
  const auto res = client.Get(path, params, headers);
  if (!res) {
    throw Error("search_failed", "search request failed: " +
                                     httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error("search_failed",
                "search endpoint returned HTTP " + std::to_string(res->status));
  }
  try {
    return normalize_search_response(json::parse(res->body));
  } catch (const json::exception& e) {
    throw Error("search_failed", std::string("bad search response: ") + e.what());
  }
}

}  // namespace dkit
