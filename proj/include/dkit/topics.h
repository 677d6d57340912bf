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

// LDA trained by collapsed Gibbs sampling, with fold-in inference for new
// token sequences (sentences, concept pseudo-documents).

#ifndef DKIT_TOPICS_H_
#define DKIT_TOPICS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace dkit {

class Taxonomy;

using TokenList = std::vector<std::string>;
// Length-K probability vector.
using TopicDistribution = Eigen::VectorXd;

inline constexpr int kTopicModelFormatVersion = 1;

class TopicModel {
 public:
  TopicModel() = default;
  // topic_word is K x V; rows must be strictly positive and sum to 1.
  TopicModel(std::vector<std::string> vocabulary, Eigen::MatrixXd topic_word,
             double alpha, double beta);

  int num_topics() const { return static_cast<int>(topic_word_.rows()); }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const Eigen::MatrixXd& topic_word() const { return topic_word_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  std::optional<int> word_id(std::string_view word) const;

  nlohmann::json to_json() const;
  static TopicModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static TopicModel load(const std::string& path);

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, int> index_;
  Eigen::MatrixXd topic_word_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

struct LdaConfig {
  int topics = 100;
  double alpha = -1.0;  // negative means 50 / topics
  double beta = 0.01;
  int iterations = 200;
  std::uint64_t seed = 1;
};

// Throws ConfigError for fewer than two documents, topics < 1,
// iterations < 1, or an empty vocabulary.
TopicModel train_lda(const std::vector<TokenList>& docs, const LdaConfig& cfg);

struct FoldInConfig {
  int iterations = 20;
  int average_last = 10;  // doc-topic proportions averaged over these sweeps
  std::uint64_t seed = 7;
};

// Fold-in Gibbs with the topic-word matrix frozen. Out-of-vocabulary tokens
// are dropped; an all-OOV input yields the uniform distribution.
TopicDistribution infer_topics(const TopicModel& model, const TokenList& tokens,
                               const FoldInConfig& cfg = {});

// Tokens of the pseudo-document describing a concept: its label followed by
// its `top_instances` most typical instances, all run through topic_tokens().
TokenList concept_pseudo_document(const Taxonomy& t, std::string_view concept_label,
                                  std::size_t top_instances);

// Topic distribution of a concept's pseudo-document. Throws
// UnknownEntryError for unknown concepts.
TopicDistribution concept_topic_distribution(const TopicModel& model,
                                             const Taxonomy& t,
                                             std::string_view concept_label,
                                             std::size_t top_instances,
                                             const FoldInConfig& cfg = {});

// Per-token perplexity of `docs`, each document's topic mix obtained by
// fold-in. OOV tokens are skipped.
double perplexity(const TopicModel& model, const std::vector<TokenList>& docs,
                  const FoldInConfig& cfg = {});

}  // namespace dkit

#endif  // DKIT_TOPICS_H_
