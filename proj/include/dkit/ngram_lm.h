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


// Interpolated Kneser-Ney n-gram language model (fixed discount 0.75) over
// case-folded word tokens. Each training line is one sentence, padded with
// order-1 "<s>" tokens and closed by "</s>". Unknown words map to "<unk>",
// which receives only interpolated mass.

#ifndef DKIT_NGRAM_LM_H_
#define DKIT_NGRAM_LM_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dkit {

inline constexpr double kKneserNeyDiscount = 0.75;

class NgramLanguageModel {
 public:
  int order() const { return order_; }
  // Predictable vocabulary: training words, "</s>" and "<unk>".
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  // p(word | context); only the last order-1 context tokens are used and
  // missing positions are "<s>".
  double prob(const std::vector<std::string>& context, std::string_view word) const;

  // Natural-log probability of a sentence (tokenized with word_tokens) with
  // padding and the end marker.
  double sentence_logprob(std::string_view sentence) const;
  double sentence_logprob(const std::vector<std::string>& tokens) const;

  // Raw training count of an n-gram of length 1..order ("<s>"/"</s>" allowed);
  // 0 for longer n-grams.
  std::int64_t count(const std::vector<std::string>& ngram) const;

  friend NgramLanguageModel train_ngram_lm(const std::vector<std::string>& docs,
                                           int order);

 private:
  using Key = std::vector<int>;
  struct ContextStats {
    double total = 0.0;
    double types = 0.0;
  };

  int id_of(std::string_view word) const;
  double prob_ids(const Key& history, int word, int level) const;

  int order_ = 3;
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, int> ids_;  // also holds "<s>"
  int bos_ = -1;
  int unk_ = -1;
  // Per level j (1..order): score count of j-grams, raw at the top level and
  // continuation counts below; and per-context totals.
  std::vector<std::map<Key, double>> score_;
  std::vector<std::map<Key, ContextStats>> context_;
  std::vector<std::map<Key, std::int64_t>> raw_;
};

// order must be 3 or 5; throws ConfigError otherwise or when no training
// line has a token.
NgramLanguageModel train_ngram_lm(const std::vector<std::string>& docs, int order);

}  // namespace dkit

#endif  // DKIT_NGRAM_LM_H_
