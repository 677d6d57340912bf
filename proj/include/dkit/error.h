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

#ifndef DKIT_ERROR_H_
#define DKIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace dkit {

// Every error raised by the toolkit carries a short machine-readable code
// (e.g. "invalid_config", "unknown_instance") next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error("invalid_config", message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message)
      : Error("parse_error", message) {}
};

// Raised for lookups of concepts/instances that the taxonomy does not hold.
// Kept distinct from a zero probability.
class UnknownEntryError : public Error {
 public:
  UnknownEntryError(const std::string& kind, const std::string& name)
      : Error("unknown_" + kind, "unknown " + kind + ": '" + name + "'") {}
};

class MissingResourceError : public Error {
 public:
  explicit MissingResourceError(const std::string& resource)
      : Error("missing_resource", "missing resource: " + resource),
        resource_(resource) {}

  const std::string& resource() const { return resource_; }

 private:
  std::string resource_;
};

// Request payload violating a field-level invariant.
class ValidationError : public Error {
 public:
  struct Field {
    std::string field;
    std::string message;
  };

  explicit ValidationError(std::vector<Field> fields)
      : Error("invalid_request", summarize(fields)), fields_(std::move(fields)) {}
  const std::vector<Field>& fields() const { return fields_; }

 private:
  static std::string summarize(const std::vector<Field>& fields) {
    std::string out;
    for (const auto& f : fields) {
      if (!out.empty()) out += "; ";
      out += f.field + ": " + f.message;
    }
    return out;
  }

  std::vector<Field> fields_;
};

}  // namespace dkit

#endif  // DKIT_ERROR_H_
