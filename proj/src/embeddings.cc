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

#include "dkit/embeddings.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dkit/error.h"
#include "dkit/text.h"
#include "json.hpp"

namespace dkit {

using nlohmann::json;

Embeddings Embeddings::load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embeddings: " + path);
  return read_text(in, path);
}

Embeddings Embeddings::read_text(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty embeddings file");
  const auto header = split_whitespace(line);
  long long count = 0;
  int dim = 0;
  try {
    if (header.size() != 2) throw std::invalid_argument("header");
    count = std::stoll(header[0]);
    dim = std::stoi(header[1]);
  } catch (const std::exception&) {
    throw ParseError(source + ":1: expected header 'V D'");
  }
  if (dim <= 0 || count < 0) throw ParseError(source + ":1: bad header");
  Embeddings emb(dim);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cols = split_whitespace(line);
    if (cols.empty()) continue;
    if (cols.size() != static_cast<std::size_t>(dim) + 1) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(dim) + " values");
    }
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
      try {
        v(i) = std::stod(cols[static_cast<std::size_t>(i) + 1]);
      } catch (const std::exception&) {
        throw ParseError(source + ":" + std::to_string(lineno) + ": bad number");
      }
    }
    emb.add(cols[0], v);
  }
  if (static_cast<long long>(emb.size()) != count) {
    throw ParseError(source + ": header declares " + std::to_string(count) +
                     " words, found " + std::to_string(emb.size()));
  }
  return emb;
}

void Embeddings::write_text(std::ostream& out) const {
  out << words_.size() << ' ' << dimension_ << '\n';
  std::ostringstream row;
  row.precision(17);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << words_[i];
    for (Eigen::Index d = 0; d < vectors_[i].size(); ++d) {
      row.str("");
      row << vectors_[i](d);
      out << ' ' << row.str();
    }
    out << '\n';
  }
}

void Embeddings::add(std::string_view word, const Eigen::VectorXd& vector) {
  if (dimension_ == 0) dimension_ = static_cast<int>(vector.size());
  if (vector.size() != dimension_) {
    throw ConfigError("embedding dimension mismatch for '" + std::string(word) + "'");
  }
  const std::string w(word);
  const auto it = index_.find(w);
  if (it != index_.end()) {
    vectors_[it->second] = vector;
    return;
  }
  index_.emplace(w, words_.size());
  words_.push_back(w);
  vectors_.push_back(vector);
}

std::optional<Eigen::VectorXd> Embeddings::lookup(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) it = index_.find(casefold(word));
  if (it == index_.end()) return std::nullopt;
  return vectors_[it->second];
}

Eigen::VectorXd Embeddings::average(const std::vector<std::string>& tokens) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dimension_);
  int known = 0;
  for (const auto& t : tokens) {
    if (const auto v = lookup(t)) {
      sum += *v;
      ++known;
    }
  }
  if (known > 0) sum /= static_cast<double>(known);
  return sum;
}

Eigen::VectorXd Embeddings::text_vector(std::string_view text) const {
  return average(word_tokens(text));
}

double text_similarity(const Embeddings& emb, std::string_view a,
                       std::string_view b) {
  if (emb.dimension() == 0) return 0.0;
  return cosine(emb.text_vector(a), emb.text_vector(b));
}

FrequencyTable FrequencyTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open frequency table: " + path);
  return read(in, path);
}

FrequencyTable FrequencyTable::read(std::istream& in, const std::string& source) {
  FrequencyTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cols = split(t, '\t');
    std::int64_t count = -1;
    if (cols.size() == 2) {
      const std::string c = trim(cols[1]);
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
      if (ec != std::errc() || ptr != c.data() + c.size()) count = -1;
    }
    if (count < 0) {
      throw ParseError(source + ":" + std::to_string(lineno) +
                       ": expected token<TAB>count");
    }
    table.add(cols[0], count);
  }
  return table;
}

void FrequencyTable::add(std::string_view token, std::int64_t count) {
  auto& slot = counts_[casefold(trim(token))];
  slot += count;
  max_count_ = std::max(max_count_, slot);
}

std::int64_t FrequencyTable::count(std::string_view token) const {
  const auto it = counts_.find(casefold(token));
  return it == counts_.end() ? 0 : it->second;
}

double FrequencyTable::log_scaled(std::string_view text) const {
  if (max_count_ <= 0) return 0.0;
  const auto tokens = word_tokens(text);
  if (tokens.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& t : tokens) sum += static_cast<double>(count(t));
  const double mean = sum / static_cast<double>(tokens.size());
  return std::log1p(mean) / std::log1p(static_cast<double>(max_count_));
}

std::optional<Eigen::VectorXd> WindowContextualEmbedder::embed(
    std::string_view sentence, std::size_t begin, std::size_t end) const {
  if (embeddings_.dimension() == 0) return std::nullopt;
  begin = std::min(begin, sentence.size());
  end = std::clamp(end, begin, sentence.size());
  const Eigen::VectorXd span =
      embeddings_.text_vector(sentence.substr(begin, end - begin));
  auto left = word_tokens(sentence.substr(0, begin));
  auto right = word_tokens(sentence.substr(end));
  const auto w = static_cast<std::size_t>(std::max(0, window_));
  std::vector<std::string> context;
  for (std::size_t i = left.size() > w ? left.size() - w : 0; i < left.size(); ++i)
    context.push_back(left[i]);
  for (std::size_t i = 0; i < right.size() && i < w; ++i) context.push_back(right[i]);
  const Eigen::VectorXd ctx = embeddings_.average(context);
  return ((1.0 - context_weight_) * span + context_weight_ * ctx).eval();
}

CachedContextualEmbedder::CachedContextualEmbedder(std::string path,
                                                   const ContextualEmbedder* backend)
    : path_(std::move(path)), backend_(backend) {
  std::ifstream in(path_);
  if (!in) return;  // created on first write
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const auto values = j.at("vector").get<std::vector<double>>();
      Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
      for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
      cache_[cache_key(j.at("sentence").get<std::string>(),
                       j.at("begin").get<std::size_t>(),
                       j.at("end").get<std::size_t>())] = v;
    } catch (const json::exception& e) {
      throw ParseError(path_ + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string CachedContextualEmbedder::cache_key(std::string_view sentence,
                                                std::size_t begin,
                                                std::size_t end) {
  return std::to_string(begin) + ":" + std::to_string(end) + "\t" +
         std::string(sentence);
}

std::optional<Eigen::VectorXd> CachedContextualEmbedder::embed(
    std::string_view sentence, std::size_t begin, std::size_t end) const {
  const std::string key = cache_key(sentence, begin, end);
  std::lock_guard<std::mutex> lock(mutex_);
  if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (!backend_) return std::nullopt;
  auto v = backend_->embed(sentence, begin, end);
  if (!v) return std::nullopt;
  cache_.emplace(key, *v);
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    json j;
    j["sentence"] = std::string(sentence);
    j["begin"] = begin;
    j["end"] = end;
    j["vector"] = std::vector<double>(v->data(), v->data() + v->size());
    out << j.dump() << '\n';
  }
  return v;
}

std::size_t CachedContextualEmbedder::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

}  // namespace dkit
