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


#include "dkit/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dkit/error.h"
#include "dkit/text.h"

namespace dkit {
namespace {

constexpr std::string_view kBos = "<s>";
constexpr std::string_view kEos = "</s>";
constexpr std::string_view kUnk = "<unk>";

}  // namespace

NgramLanguageModel train_ngram_lm(const std::vector<std::string>& docs, int order) {
  if (order != 3 && order != 5) {
    throw ConfigError("language model order must be 3 or 5, got " + std::to_string(order));
  }
  std::vector<std::vector<std::string>> sentences;
  std::set<std::string> words;
  for (const auto& d : docs) {
    auto tokens = word_tokens(d);
    if (tokens.empty()) continue;
    words.insert(tokens.begin(), tokens.end());
    sentences.push_back(std::move(tokens));
  }
  if (sentences.empty()) throw ConfigError("language model corpus has no tokens");

  NgramLanguageModel lm;
  lm.order_ = order;
  lm.vocabulary_.assign(words.begin(), words.end());
  lm.vocabulary_.emplace_back(kEos);
  lm.vocabulary_.emplace_back(kUnk);
  for (std::size_t i = 0; i < lm.vocabulary_.size(); ++i) {
    lm.ids_[lm.vocabulary_[i]] = static_cast<int>(i);
  }
  lm.unk_ = lm.ids_.at(std::string(kUnk));
  lm.bos_ = static_cast<int>(lm.vocabulary_.size());
  lm.ids_[std::string(kBos)] = lm.bos_;
  const int eos = lm.ids_.at(std::string(kEos));

  const auto n = static_cast<std::size_t>(order);
  lm.raw_.assign(n + 1, {});
  lm.score_.assign(n + 1, {});
  lm.context_.assign(n + 1, {});
  for (const auto& s : sentences) {
    std::vector<int> padded(n - 1, lm.bos_);
    for (const auto& w : s) padded.push_back(lm.ids_.at(w));
    padded.push_back(eos);
    for (std::size_t i = n - 1; i < padded.size(); ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        NgramLanguageModel::Key gram(padded.begin() + static_cast<std::ptrdiff_t>(i + 1 - j),
                                     padded.begin() + static_cast<std::ptrdiff_t>(i + 1));
        ++lm.raw_[j][gram];
      }
    }
  }
  for (const auto& [gram, c] : lm.raw_[n]) lm.score_[n][gram] = static_cast<double>(c);
  for (std::size_t j = 1; j < n; ++j) {
    for (const auto& [gram, c] : lm.raw_[j + 1]) {
      lm.score_[j][NgramLanguageModel::Key(gram.begin() + 1, gram.end())] += 1.0;
    }
  }
  for (std::size_t j = 1; j <= n; ++j) {
    for (const auto& [gram, c] : lm.score_[j]) {
      auto& stats = lm.context_[j][NgramLanguageModel::Key(gram.begin(), gram.end() - 1)];
      stats.total += c;
      stats.types += 1.0;
    }
  }
  return lm;
}

int NgramLanguageModel::id_of(std::string_view word) const {
  const auto it = ids_.find(casefold(word));
  return it == ids_.end() ? unk_ : it->second;
}

double NgramLanguageModel::prob_ids(const Key& history, int word, int level) const {
  const auto lvl = static_cast<std::size_t>(level);
  const Key h(history.end() - (level - 1), history.end());
  const auto ctx = context_[lvl].find(h);
  const double lower = level == 1 ? 1.0 / static_cast<double>(vocabulary_.size())
                                  : prob_ids(history, word, level - 1);
  if (ctx == context_[lvl].end() || ctx->second.total <= 0.0) return lower;
  Key gram = h;
  gram.push_back(word);
  const auto it = score_[lvl].find(gram);
  const double c = it == score_[lvl].end() ? 0.0 : it->second;
  const double total = ctx->second.total;
  return std::max(c - kKneserNeyDiscount, 0.0) / total +
         kKneserNeyDiscount * ctx->second.types / total * lower;
}

double NgramLanguageModel::prob(const std::vector<std::string>& context,
                                std::string_view word) const {
  Key history(static_cast<std::size_t>(order_ - 1), bos_);
  for (const auto& w : context) {
    history.erase(history.begin());
    history.push_back(id_of(w));
  }
  return prob_ids(history, id_of(word), order_);
}

double NgramLanguageModel::sentence_logprob(std::string_view sentence) const {
  return sentence_logprob(word_tokens(sentence));
}

double NgramLanguageModel::sentence_logprob(const std::vector<std::string>& tokens) const {
  Key history(static_cast<std::size_t>(order_ - 1), bos_);
  double lp = 0.0;
  auto step = [&](int w) {
    lp += std::log(prob_ids(history, w, order_));
    history.erase(history.begin());
    history.push_back(w);
  };
  for (const auto& t : tokens) step(id_of(t));
  step(ids_.at(std::string(kEos)));
  return lp;
}

std::int64_t NgramLanguageModel::count(const std::vector<std::string>& ngram) const {
  if (ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) return 0;
  Key key;
  for (const auto& w : ngram) {
    const auto it = ids_.find(casefold(w));
    if (it == ids_.end()) return 0;
    key.push_back(it->second);
  }
  const auto& table = raw_[ngram.size()];
  const auto it = table.find(key);
  return it == table.end() ? 0 : it->second;
}

}  // namespace dkit
