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

#include "dkit/topics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "dkit/error.h"
#include "dkit/kb.h"
#include "dkit/random.h"
#include "dkit/text.h"

namespace dkit {

using nlohmann::json;

namespace {

// Draws an index proportional to `weights` (all >= 0, positive sum).
int sample_discrete(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform01(rng) * total;
  const int k = static_cast<int>(weights.size());
  for (int i = 0; i < k; ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  return k - 1;
}

}  // namespace

TopicModel::TopicModel(std::vector<std::string> vocabulary,
                       Eigen::MatrixXd topic_word, double alpha, double beta)
    : vocabulary_(std::move(vocabulary)),
      topic_word_(std::move(topic_word)),
      alpha_(alpha),
      beta_(beta) {
  if (topic_word_.rows() < 1) throw ConfigError("topic model needs K >= 1");
  if (static_cast<std::size_t>(topic_word_.cols()) != vocabulary_.size()) {
    throw ConfigError("topic_word columns do not match vocabulary size");
  }
  if (vocabulary_.empty()) throw ConfigError("empty vocabulary");
  for (Eigen::Index k = 0; k < topic_word_.rows(); ++k) {
    if ((topic_word_.row(k).array() <= 0.0).any()) {
      throw ConfigError("topic_word entries must be strictly positive");
    }
    if (std::abs(topic_word_.row(k).sum() - 1.0) > 1e-6) {
      throw ConfigError("topic_word row " + std::to_string(k) +
                        " does not sum to 1");
    }
  }
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], static_cast<int>(i)).second) {
      throw ConfigError("duplicate vocabulary entry '" + vocabulary_[i] + "'");
    }
  }
}

std::optional<int> TopicModel::word_id(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

json TopicModel::to_json() const {
  json j;
  j["format_version"] = kTopicModelFormatVersion;
  j["K"] = num_topics();
  j["alpha"] = alpha_;
  j["beta"] = beta_;
  j["vocabulary"] = vocabulary_;
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(topic_word_.size()));
  for (Eigen::Index k = 0; k < topic_word_.rows(); ++k) {
    for (Eigen::Index w = 0; w < topic_word_.cols(); ++w) {
      flat.push_back(topic_word_(k, w));
    }
  }
  j["topic_word"] = flat;
  return j;
}

TopicModel TopicModel::from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kTopicModelFormatVersion) {
      throw ParseError("unsupported topic model format_version");
    }
    const int k = j.at("K").get<int>();
    auto vocab = j.at("vocabulary").get<std::vector<std::string>>();
    const auto flat = j.at("topic_word").get<std::vector<double>>();
    if (k < 1 || flat.size() != static_cast<std::size_t>(k) * vocab.size()) {
      throw ParseError("topic_word size does not match K x |vocabulary|");
    }
    Eigen::MatrixXd tw(k, static_cast<Eigen::Index>(vocab.size()));
    for (Eigen::Index r = 0; r < tw.rows(); ++r) {
      for (Eigen::Index c = 0; c < tw.cols(); ++c) {
        tw(r, c) = flat[static_cast<std::size_t>(r * tw.cols() + c)];
      }
    }
    return TopicModel(std::move(vocab), std::move(tw),
                      j.at("alpha").get<double>(), j.at("beta").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad topic model: ") + e.what());
  }
}

void TopicModel::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  out << to_json().dump() << '\n';
}

TopicModel TopicModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open topic model: " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

TopicModel train_lda(const std::vector<TokenList>& docs, const LdaConfig& cfg) {
  if (docs.size() < 2) throw ConfigError("LDA needs at least 2 documents");
  if (cfg.topics < 1) throw ConfigError("LDA needs topics >= 1");
  if (cfg.iterations < 1) throw ConfigError("LDA needs iterations >= 1");
  if (cfg.beta <= 0) throw ConfigError("beta must be positive");
  const int num_topics = cfg.topics;
  const double alpha = cfg.alpha > 0 ? cfg.alpha : 50.0 / num_topics;
  const double beta = cfg.beta;

  std::set<std::string> vocab_set;
  for (const auto& d : docs) vocab_set.insert(d.begin(), d.end());
  vocab_set.erase("");
  if (vocab_set.empty()) throw ConfigError("LDA corpus has an empty vocabulary");
  std::vector<std::string> vocabulary(vocab_set.begin(), vocab_set.end());
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    index.emplace(vocabulary[i], static_cast<int>(i));
  }
  const int v = static_cast<int>(vocabulary.size());

  std::vector<std::vector<int>> words(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& tok : docs[d]) {
      if (!tok.empty()) words[d].push_back(index.at(tok));
    }
  }

  Rng rng(cfg.seed);
  Eigen::MatrixXi doc_topic = Eigen::MatrixXi::Zero(
      static_cast<Eigen::Index>(docs.size()), num_topics);
  Eigen::MatrixXi topic_word = Eigen::MatrixXi::Zero(num_topics, v);
  Eigen::VectorXi topic_total = Eigen::VectorXi::Zero(num_topics);
  std::vector<std::vector<int>> z(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const int k = static_cast<int>(uniform_index(rng, num_topics));
      z[d][i] = k;
      doc_topic(static_cast<Eigen::Index>(d), k) += 1;
      topic_word(k, words[d][i]) += 1;
      topic_total(k) += 1;
    }
  }

  const double v_beta = v * beta;
  std::vector<double> p(static_cast<std::size_t>(num_topics));
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto di = static_cast<Eigen::Index>(d);
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const int w = words[d][i];
        int k = z[d][i];
        doc_topic(di, k) -= 1;
        topic_word(k, w) -= 1;
        topic_total(k) -= 1;
        for (int t = 0; t < num_topics; ++t) {
          p[static_cast<std::size_t>(t)] = (doc_topic(di, t) + alpha) *
                                           (topic_word(t, w) + beta) /
                                           (topic_total(t) + v_beta);
        }
        k = sample_discrete(p, rng);
        z[d][i] = k;
        doc_topic(di, k) += 1;
        topic_word(k, w) += 1;
        topic_total(k) += 1;
      }
    }
  }

  Eigen::MatrixXd phi(num_topics, v);
  for (int k = 0; k < num_topics; ++k) {
    const double denom = topic_total(k) + v_beta;
    for (int w = 0; w < v; ++w) phi(k, w) = (topic_word(k, w) + beta) / denom;
  }
  return TopicModel(std::move(vocabulary), std::move(phi), alpha, beta);
}

TopicDistribution infer_topics(const TopicModel& model, const TokenList& tokens,
                               const FoldInConfig& cfg) {
  const int num_topics = model.num_topics();
  std::vector<int> ids;
  for (const auto& tok : tokens) {
    if (const auto id = model.word_id(tok)) ids.push_back(*id);
  }
  if (ids.empty() || num_topics == 1) {
    return TopicDistribution::Constant(num_topics, 1.0 / num_topics);
  }
  const double alpha = model.alpha();
  const auto& phi = model.topic_word();
  const int iterations = std::max(1, cfg.iterations);
  const int averaged = std::clamp(cfg.average_last, 1, iterations);

  Rng rng(cfg.seed);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(num_topics);
  std::vector<int> z(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    z[i] = static_cast<int>(uniform_index(rng, num_topics));
    counts(z[i]) += 1.0;
  }
  const double n = static_cast<double>(ids.size());
  TopicDistribution sum = TopicDistribution::Zero(num_topics);
  std::vector<double> p(static_cast<std::size_t>(num_topics));
  for (int iter = 0; iter < iterations; ++iter) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      counts(z[i]) -= 1.0;
      for (int k = 0; k < num_topics; ++k) {
        p[static_cast<std::size_t>(k)] = (counts(k) + alpha) * phi(k, ids[i]);
      }
      z[i] = sample_discrete(p, rng);
      counts(z[i]) += 1.0;
    }
    if (iter >= iterations - averaged) {
      sum += (counts.array() + alpha).matrix() / (n + num_topics * alpha);
    }
  }
  return sum / sum.sum();
}

TokenList concept_pseudo_document(const Taxonomy& t, std::string_view concept_label,
                                  std::size_t top_instances_count) {
  if (!t.has_concept(concept_label)) {
    throw UnknownEntryError("concept", std::string(concept_label));
  }
  TokenList doc = topic_tokens(concept_label);
  for (const auto& inst : top_instances(t, concept_label, top_instances_count)) {
    const auto toks = topic_tokens(inst);
    doc.insert(doc.end(), toks.begin(), toks.end());
  }
  return doc;
}

TopicDistribution concept_topic_distribution(const TopicModel& model,
                                             const Taxonomy& t,
                                             std::string_view concept_label,
                                             std::size_t top_instances_count,
                                             const FoldInConfig& cfg) {
  return infer_topics(model, concept_pseudo_document(t, concept_label, top_instances_count),
                      cfg);
}

double perplexity(const TopicModel& model, const std::vector<TokenList>& docs,
                  const FoldInConfig& cfg) {
  double log_likelihood = 0.0;
  std::size_t n = 0;
  const auto& phi = model.topic_word();
  for (const auto& doc : docs) {
    const TopicDistribution theta = infer_topics(model, doc, cfg);
    for (const auto& tok : doc) {
      const auto id = model.word_id(tok);
      if (!id) continue;
      log_likelihood += std::log(theta.dot(phi.col(*id)));
      ++n;
    }
  }
  if (n == 0) throw ConfigError("perplexity needs in-vocabulary tokens");
  return std::exp(-log_likelihood / static_cast<double>(n));
}

}  // namespace dkit
