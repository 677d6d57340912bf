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


#include "dkit/baselines.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "dkit/embeddings.h"
#include "dkit/error.h"
#include "dkit/features.h"
#include "dkit/kb.h"
#include "dkit/ngram_lm.h"
#include "dkit/text.h"

namespace dkit {
namespace {

const Embeddings& need_embeddings(const BaselineResources& r) {
  if (!r.embeddings) throw MissingResourceError("embeddings");
  return *r.embeddings;
}

const NgramLanguageModel& need_lm(const BaselineResources& r) {
  if (!r.lm) throw MissingResourceError("language model");
  return *r.lm;
}

std::set<std::u32string> bigrams(std::string_view s) {
  const std::u32string p = to_code_points(casefold(s));
  std::set<std::u32string> out;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) out.insert(p.substr(i, 2));
  return out;
}

}  // namespace

std::string_view baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kEd:
      return "ed";
    case BaselineKind::kEmbSim:
      return "embsim";
    case BaselineKind::kEmbSimCf:
      return "embsim_cf";
    case BaselineKind::kRevup:
      return "revup";
    case BaselineKind::kThesaurusPath:
      return "thesaurus_path";
  }
  return "ed";
}

BaselineKind parse_baseline(std::string_view name) {
  for (auto k : {BaselineKind::kEd, BaselineKind::kEmbSim, BaselineKind::kEmbSimCf,
                 BaselineKind::kRevup, BaselineKind::kThesaurusPath}) {
    if (baseline_name(k) == name) return k;
  }
  throw ConfigError("unknown baseline '" + std::string(name) + "'");
}

double char_bigram_dice(std::string_view a, std::string_view b) {
  const auto x = bigrams(a);
  const auto y = bigrams(b);
  if (x.empty() && y.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& g : x) inter += y.count(g);
  return 2.0 * static_cast<double>(inter) / static_cast<double>(x.size() + y.size());
}

std::vector<std::string> center_ngram(std::string_view stem, std::string_view candidate) {
  const std::size_t pos = stem.find(kBlank);
  const auto before = word_tokens(pos == std::string_view::npos ? stem : stem.substr(0, pos));
  const auto after = word_tokens(pos == std::string_view::npos
                                     ? std::string_view{}
                                     : stem.substr(pos + kBlank.size()));
  std::vector<std::string> out;
  out.push_back(before.empty() ? "<s>" : before.back());
  for (auto& t : word_tokens(candidate)) out.push_back(std::move(t));
  out.push_back(after.empty() ? "</s>" : after.front());
  return out;
}

RankedList baseline_rank(BaselineKind kind, std::string_view stem, std::string_view key,
                         const std::vector<std::string>& pool,
                         const BaselineResources& r) {
  if (pool.empty()) throw ConfigError("baseline pool is empty");
  std::vector<std::string> sorted = pool;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> cands;
  std::set<std::string> seen;
  for (const auto& s : sorted) {
    if (!s.empty() && seen.insert(casefold(s)).second) cands.push_back(s);
  }

  RankedList out;
  switch (kind) {
    case BaselineKind::kEd:
      for (const auto& d : cands) {
        out.entries.push_back({d, -static_cast<double>(edit_distance(key, d))});
      }
      break;
    case BaselineKind::kEmbSim:
    case BaselineKind::kEmbSimCf: {
      const Embeddings& emb = need_embeddings(r);
      const NgramLanguageModel* lm = kind == BaselineKind::kEmbSimCf ? &need_lm(r) : nullptr;
      const Eigen::VectorXd va = emb.text_vector(key);
      for (const auto& d : cands) {
        if (lm && lm->count(center_ngram(stem, d)) > r.trigram_threshold) continue;
        out.entries.push_back({d, cosine(va, emb.text_vector(d))});
      }
      break;
    }
    case BaselineKind::kRevup: {
      const RevupWeights& w = r.revup;
      if (w.cosine < 0 || w.dice < 0 || w.lm < 0 ||
          std::abs(w.cosine + w.dice + w.lm - 1.0) > 1e-9) {
        throw ConfigError("revup weights must be non-negative and sum to 1");
      }
      const Embeddings& emb = need_embeddings(r);
      const NgramLanguageModel& lm = need_lm(r);
      const Eigen::VectorXd va = emb.text_vector(key);
      for (const auto& d : cands) {
        const std::string completed = fill_blank(stem, d);
        const double tokens = static_cast<double>(word_tokens(completed).size() + 1);
        const double lm_score = std::exp(lm.sentence_logprob(completed) / tokens);
        out.entries.push_back({d, w.cosine * cosine(va, emb.text_vector(d)) +
                                      w.dice * char_bigram_dice(key, d) + w.lm * lm_score});
      }
      break;
    }
    case BaselineKind::kThesaurusPath: {
      if (!r.taxonomy) throw MissingResourceError("taxonomy");
      for (const auto& d : cands) {
        const auto hops = hop_distance(*r.taxonomy, key, d);
        out.entries.push_back({d, hops ? 1.0 / (1.0 + *hops) : 0.0});
      }
      break;
    }
  }
  sort_ranked(out.entries);
  out.fallback = out.empty();
  return out;
}

}  // namespace dkit
