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


#include "dkit/server.h"

#include <iostream>
#include <sstream>

#include "dkit/error.h"
#include "httplib.h"

namespace dkit {
namespace {

using nlohmann::json;

HttpResult json_result(int status, const json& j) {
  return {status, "application/json", j.dump()};
}

HttpResult error_result(int status, const Error& e) {
  json err = {{"code", e.code()}, {"message", e.what()}};
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    json fields = json::array();
    for (const auto& f : v->fields()) fields.push_back({{"field", f.field}, {"message", f.message}});
    err["fields"] = fields;
  }
  return json_result(status, {{"error", err}});
}

int status_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "invalid_request" || c == "invalid_config" || c == "parse_error") return 400;
  if (c.rfind("unknown_", 0) == 0) return 404;
  return 500;
}

}  // namespace

struct DistractorService::Impl {
  httplib::Server server;
  std::string host;
  int port = 0;
};

DistractorService::DistractorService(const Toolkit& toolkit, FeedbackStore& feedback)
    : toolkit_(toolkit), feedback_(feedback), impl_(std::make_unique<Impl>()) {}

DistractorService::~DistractorService() = default;

HttpResult DistractorService::handle(const std::string& method, const std::string& path,
                                     const std::string& body,
                                     const std::map<std::string, std::string>& query) const {
  try {
    auto parse_body = [&]() {
      try {
        return json::parse(body);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::vector<ValidationError::Field>{
            {"body", std::string("malformed JSON: ") + e.what()}});
      }
    };
    if (method == "GET" && path == "/v1/health") {
      const RankModel* m = toolkit_.model();
      return json_result(200, {{"status", "ok"},
                               {"model_id", m ? m->model_id() : ""},
                               {"schema_version", kFeatureSchemaVersion}});
    }
    if (method == "GET" && path == "/v1/models") {
      json models = json::array();
      if (const RankModel* m = toolkit_.model()) {
        models.push_back({{"model_id", m->model_id()},
                          {"kind", std::string(ranker_kind_name(m->kind()))},
                          {"schema_version", m->schema_version()},
                          {"trees", m->trees().size()},
                          {"default", true}});
      }
      return json_result(200, {{"models", models}});
    }
    if (method == "POST" && path == "/v1/distractors") {
      const GenerationRequest req = parse_generation_request(parse_body());
      return json_result(200, generate(toolkit_, req).to_json());
    }
    if (method == "POST" && path == "/v1/feedback") {
      const std::string id = feedback_.append(parse_feedback(parse_body()));
      return json_result(201, {{"id", id}});
    }
    if (method == "GET" && path == "/v1/feedback/export") {
      FeedbackFilter filter;
      if (auto it = query.find("session_id"); it != query.end()) filter.session_id = it->second;
      if (auto it = query.find("verdict"); it != query.end() && !it->second.empty()) {
        filter.verdict = parse_verdict(it->second);
        if (!filter.verdict) {
          throw ValidationError(std::vector<ValidationError::Field>{
              {"verdict", "must be one of accepted, rejected, edited"}});
        }
      }
      std::ostringstream out;
      write_groups(export_feedback(feedback_.records(), filter, toolkit_.features(false)), out);
      return {200, "application/x-ndjson", out.str()};
    }
    const bool known = path == "/v1/health" || path == "/v1/models" ||
                       path == "/v1/distractors" || path == "/v1/feedback" ||
                       path == "/v1/feedback/export";
    if (known) return error_result(405, Error("method_not_allowed", method + " " + path));
    return error_result(404, Error("not_found", "no route for " + path));
  } catch (const Error& e) {
    return error_result(status_for(e), e);
  } catch (const std::exception& e) {
    return error_result(500, Error("internal", e.what()));
  }
}

int DistractorService::bind(const std::string& host, int port, int threads) {
  auto& svr = impl_->server;
  const std::size_t n = static_cast<std::size_t>(std::max(1, threads));
  svr.new_task_queue = [n] { return new httplib::ThreadPool(n); };
  // SO_REUSEPORT (the library default) would let a second server share the
  // port silently; a busy port must fail instead.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query[k] = v;
    const HttpResult r = handle(req.method, req.path, req.body, query);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  for (const char* p : {"/v1/health", "/v1/models", "/v1/feedback/export"}) svr.Get(p, dispatch);
  for (const char* p : {"/v1/distractors", "/v1/feedback"}) svr.Post(p, dispatch);
  svr.set_error_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const HttpResult r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
  int bound = port;
  if (port == 0) {
    bound = svr.bind_to_any_port(host);
  } else if (!svr.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error("port_busy", "cannot bind " + host + ":" + std::to_string(port) +
                                 " (port in use or address unavailable)");
  }
  impl_->host = host;
  impl_->port = bound;
  return bound;
}

void DistractorService::run() { impl_->server.listen_after_bind(); }

void DistractorService::stop() { impl_->server.stop(); }

ResourceNeeds service_needs() {
  ResourceNeeds needs;
  needs.taxonomy = true;
  needs.topic_model = true;
  needs.embeddings = true;
  needs.model = true;
  return needs;
}

void run_service(const ToolkitConfig& cfg) {
  const auto toolkit = Toolkit::load(cfg, service_needs());
  toolkit->selector();
  FeedbackStore store(cfg.service.feedback_log, cfg.service.compact_every);
  store.compact();
  DistractorService service(*toolkit, store);
  const int port = service.bind(cfg.service.host, cfg.service.port, cfg.service.threads);
  std::cerr << "dkit: serving on http://" << cfg.service.host << ":" << port << " (model "
            << toolkit->model()->model_id() << ")\n";
  service.run();
}

}  // namespace dkit
