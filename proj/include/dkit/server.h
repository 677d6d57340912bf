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


// HTTP service:
//
//   GET  /v1/health           {status, model_id, schema_version}
//   POST /v1/distractors      GenerationRequest -> GenerationResponse
//   POST /v1/feedback         FeedbackRecord -> {id}
//   GET  /v1/feedback/export  training-group lines (?session_id=&verdict=)
//   GET  /v1/models           loaded ranking models
//
// Errors are {"error": {"code", "message", "fields"?}} with a 4xx/5xx status.

#ifndef DKIT_SERVER_H_
#define DKIT_SERVER_H_

#include <map>
#include <memory>
#include <string>

#include "dkit/config.h"
#include "dkit/feedback.h"
#include "dkit/toolkit.h"

namespace dkit {

struct HttpResult {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

class DistractorService {
 public:
  DistractorService(const Toolkit& toolkit, FeedbackStore& feedback);
  ~DistractorService();

  // Socket-free dispatch, used by the HTTP layer and by tests.
  HttpResult handle(const std::string& method, const std::string& path,
                    const std::string& body,
                    const std::map<std::string, std::string>& query = {}) const;

  // Binds and serves until stop(). port 0 picks a free port. Throws
  // Error("port_busy") when the address cannot be bound.
  int bind(const std::string& host, int port, int threads);
  void run();
  void stop();

 private:
  struct Impl;
  const Toolkit& toolkit_;
  FeedbackStore& feedback_;
  std::unique_ptr<Impl> impl_;
};

// Resources the service refuses to start without.
ResourceNeeds service_needs();

// Loads everything (failing fast on a missing resource), binds, serves.
void run_service(const ToolkitConfig& cfg);

}  // namespace dkit

#endif  // DKIT_SERVER_H_
