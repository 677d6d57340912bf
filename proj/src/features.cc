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

#include "dkit/features.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <vector>

#include "dkit/embeddings.h"
#include "dkit/error.h"
#include "dkit/openie.h"
#include "dkit/pos_tagger.h"
#include "dkit/search.h"
#include "dkit/text.h"

namespace dkit {
namespace {

constexpr std::array<std::string_view, kNumFeatures> kNames = {
    "emb_sim_qd",        "emb_sim_ad",         "ctx_emb_sim_ad",
    "edit_distance_abs", "edit_distance_rel_a", "edit_distance_rel_d",
    "token_len_a",       "token_len_d",        "token_len_diff_abs",
    "token_len_ratio",   "char_len_a",         "char_len_d",
    "char_len_diff_abs", "char_len_ratio",     "singular_plural_consistency",
    "lcp_abs",           "lcp_rel_a",          "lcp_rel_d",
    "lcsuffix_abs",      "lcsuffix_rel_a",     "lcsuffix_rel_d",
    "lcsubseq_abs",      "lcsubseq_rel_a",     "lcsubseq_rel_d",
    "pos_jaccard",       "log_freq_a",         "log_freq_d",
    "log_freq_diff_abs", "unigram_jaccard_ad", "bigram_jaccard_ad",
    "token_overlap_qd_jaccard", "char_bigram_jaccard_ad", "web_search_score",
};

std::u32string folded_points(std::string_view s) {
  return to_code_points(casefold(s));
}

template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double safe_div(double num, double den) { return den > 0 ? num / den : 0.0; }

double ratio_min_max(double x, double y) {
  const double hi = std::max(x, y);
  return hi > 0 ? std::min(x, y) / hi : 0.0;
}

std::set<std::string> token_bigrams(const std::vector<std::string>& tokens) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    out.insert(tokens[i] + '\x1f' + tokens[i + 1]);
  }
  return out;
}

std::set<std::uint64_t> char_bigrams(const std::u32string& s) {
  std::set<std::uint64_t> out;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    out.insert((static_cast<std::uint64_t>(s[i]) << 32) | s[i + 1]);
  }
  return out;
}

// Plurality of the head (last) word; suffix heuristic when the tagger gives
// nothing useful.
bool is_plural(std::string_view text, const PosTagger& tagger) {
  auto words = word_tokens(text);
  if (words.empty()) return false;
  const auto tags = tagger.tag(words);
  const std::string& head_tag = tags.back();
  if (is_noun_tag(head_tag)) return is_plural_tag(head_tag);
  const std::string& w = words.back();
  return w.size() > 2 && w.back() == 's' && w[w.size() - 2] != 's';
}

std::optional<Eigen::VectorXd> contextual_vector(const ContextualEmbedder& ctx,
                                                 std::string_view stem,
                                                 std::string_view word) {
  const std::size_t pos = stem.find(kBlank);
  if (pos == std::string_view::npos) {
    return ctx.embed(word, 0, word.size());
  }
  return ctx.embed(fill_blank(stem, word), pos, pos + word.size());
}

}  // namespace

const std::array<std::string_view, kNumFeatures>& feature_names() { return kNames; }

bool is_bounded_feature(int slot) {
  switch (slot) {
    case kEmbSimQd:
    case kEmbSimAd:
    case kCtxEmbSimAd:
    case kTokenLenRatio:
    case kCharLenRatio:
    case kSingularPluralConsistency:
    case kLcpRelA:
    case kLcpRelD:
    case kLcsuffixRelA:
    case kLcsuffixRelD:
    case kLcsubseqRelA:
    case kLcsubseqRelD:
    case kPosJaccard:
    case kLogFreqA:
    case kLogFreqD:
    case kLogFreqDiffAbs:
    case kUnigramJaccardAd:
    case kBigramJaccardAd:
    case kTokenOverlapQdJaccard:
    case kCharBigramJaccardAd:
    case kWebSearchScore:
      return true;
    default:
      return false;
  }
}

std::pair<double, double> feature_bounds(int slot) {
  if (slot == kEmbSimQd || slot == kEmbSimAd || slot == kCtxEmbSimAd) {
    return {-1.0, 1.0};
  }
  if (is_bounded_feature(slot)) return {0.0, 1.0};
  return {0.0, std::numeric_limits<double>::infinity()};
}

int swapped_feature(int slot) {
  switch (slot) {
    case kEmbSimQd:
    case kTokenOverlapQdJaccard:
    case kWebSearchScore:
      return -1;
    case kEditDistanceRelA: return kEditDistanceRelD;
    case kEditDistanceRelD: return kEditDistanceRelA;
    case kTokenLenA: return kTokenLenD;
    case kTokenLenD: return kTokenLenA;
    case kCharLenA: return kCharLenD;
    case kCharLenD: return kCharLenA;
    case kLcpRelA: return kLcpRelD;
    case kLcpRelD: return kLcpRelA;
    case kLcsuffixRelA: return kLcsuffixRelD;
    case kLcsuffixRelD: return kLcsuffixRelA;
    case kLcsubseqRelA: return kLcsubseqRelD;
    case kLcsubseqRelD: return kLcsubseqRelA;
    case kLogFreqA: return kLogFreqD;
    case kLogFreqD: return kLogFreqA;
    default:
      return slot;
  }
}

bool is_symmetric_feature(int slot) { return swapped_feature(slot) == slot; }

int edit_distance(std::string_view a, std::string_view b) {
  const auto x = folded_points(a);
  const auto y = folded_points(b);
  std::vector<int> row(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const int up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (x[i - 1] == y[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[y.size()];
}

int longest_common_prefix_length(std::string_view a, std::string_view b) {
  const auto x = folded_points(a);
  const auto y = folded_points(b);
  const auto [ix, iy] = std::mismatch(x.begin(), x.end(), y.begin(), y.end());
  return static_cast<int>(ix - x.begin());
}

int longest_common_suffix_length(std::string_view a, std::string_view b) {
  const auto x = folded_points(a);
  const auto y = folded_points(b);
  const auto [ix, iy] = std::mismatch(x.rbegin(), x.rend(), y.rbegin(), y.rend());
  return static_cast<int>(ix - x.rbegin());
}

int longest_common_subsequence_length(std::string_view a, std::string_view b) {
  const auto x = folded_points(a);
  const auto y = folded_points(b);
  std::vector<int> row(y.size() + 1, 0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    int diag = 0;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const int up = row[j];
      row[j] = x[i - 1] == y[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[y.size()];
}

double pos_jaccard(std::string_view a, std::string_view d, const PosTagger& tagger) {
  return jaccard(tag_set(tagger, a), tag_set(tagger, d));
}

WebScore web_search_score(std::string_view stem, std::string_view candidate,
                          const FeatureResources& r) {
  WebScore neutral;
  if (!r.use_web_score || r.search == nullptr || r.embeddings == nullptr) {
    return neutral;
  }
  const PosTagger& tagger = r.tagger ? *r.tagger : default_pos_tagger();
  const std::string completed = fill_blank(stem, candidate);
  const auto own = extract_triplet_texts(completed, tagger);
  if (own.empty()) return neutral;

  std::vector<SearchResult> results;
  try {
    results = r.search->search(completed);
  } catch (const std::exception& e) {
    std::cerr << "warning: web search failed, using neutral score: " << e.what()
              << '\n';
    return neutral;
  }
  std::vector<std::string> found;
  for (const auto& res : results) {
    for (const std::string* text : {&res.title, &res.snippet}) {
      const auto t = extract_triplet_texts(*text, tagger);
      found.insert(found.end(), t.begin(), t.end());
    }
  }
  if (found.empty()) return neutral;

  std::vector<Eigen::VectorXd> found_vectors;
  found_vectors.reserve(found.size());
  for (const auto& t : found) found_vectors.push_back(r.embeddings->text_vector(t));
  double best = 0.0;
  for (const auto& t : own) {
    const Eigen::VectorXd v = r.embeddings->text_vector(t);
    for (const auto& w : found_vectors) best = std::max(best, cosine(v, w));
  }
  return {std::clamp(best, 0.0, 1.0), false};
}

FeatureExtraction extract_features(std::string_view stem, std::string_view key,
                                   std::string_view candidate,
                                   const FeatureResources& r) {
  if (candidate.empty()) throw ConfigError("empty candidate");
  FeatureExtraction out;
  FeatureVector& f = out.values;
  const PosTagger& tagger = r.tagger ? *r.tagger : default_pos_tagger();
  const std::string context = strip_blank(stem);

  if (r.embeddings && r.embeddings->dimension() > 0) {
    const Eigen::VectorXd vd = r.embeddings->text_vector(candidate);
    f[kEmbSimQd] = cosine(r.embeddings->text_vector(context), vd);
    f[kEmbSimAd] = cosine(r.embeddings->text_vector(key), vd);
  }

  out.contextual_missing = true;
  if (r.contextual) {
    const auto ca = contextual_vector(*r.contextual, stem, key);
    const auto cd = contextual_vector(*r.contextual, stem, candidate);
    if (ca && cd && ca->size() == cd->size()) {
      f[kCtxEmbSimAd] = cosine(*ca, *cd);
      out.contextual_missing = false;
    }
  }

  const double len_a = static_cast<double>(folded_points(key).size());
  const double len_d = static_cast<double>(folded_points(candidate).size());
  const double ed = edit_distance(key, candidate);
  f[kEditDistanceAbs] = ed;
  f[kEditDistanceRelA] = safe_div(ed, len_a);
  f[kEditDistanceRelD] = safe_div(ed, len_d);

  const auto tokens_a = word_tokens(key);
  const auto tokens_d = word_tokens(candidate);
  const double ta = static_cast<double>(tokens_a.size());
  const double td = static_cast<double>(tokens_d.size());
  f[kTokenLenA] = ta;
  f[kTokenLenD] = td;
  f[kTokenLenDiffAbs] = std::abs(ta - td);
  f[kTokenLenRatio] = ratio_min_max(ta, td);
  f[kCharLenA] = len_a;
  f[kCharLenD] = len_d;
  f[kCharLenDiffAbs] = std::abs(len_a - len_d);
  f[kCharLenRatio] = ratio_min_max(len_a, len_d);
  f[kSingularPluralConsistency] =
      is_plural(key, tagger) == is_plural(candidate, tagger) ? 1.0 : 0.0;

  const double lcp = longest_common_prefix_length(key, candidate);
  const double lcsuf = longest_common_suffix_length(key, candidate);
  const double lcs = longest_common_subsequence_length(key, candidate);
  f[kLcpAbs] = lcp;
  f[kLcpRelA] = safe_div(lcp, len_a);
  f[kLcpRelD] = safe_div(lcp, len_d);
  f[kLcsuffixAbs] = lcsuf;
  f[kLcsuffixRelA] = safe_div(lcsuf, len_a);
  f[kLcsuffixRelD] = safe_div(lcsuf, len_d);
  f[kLcsubseqAbs] = lcs;
  f[kLcsubseqRelA] = safe_div(lcs, len_a);
  f[kLcsubseqRelD] = safe_div(lcs, len_d);

  f[kPosJaccard] = pos_jaccard(key, candidate, tagger);

  if (r.frequencies) {
    f[kLogFreqA] = r.frequencies->log_scaled(key);
    f[kLogFreqD] = r.frequencies->log_scaled(candidate);
    f[kLogFreqDiffAbs] = std::abs(f[kLogFreqA] - f[kLogFreqD]);
  }

  const std::set<std::string> uni_a(tokens_a.begin(), tokens_a.end());
  const std::set<std::string> uni_d(tokens_d.begin(), tokens_d.end());
  f[kUnigramJaccardAd] = jaccard(uni_a, uni_d);
  f[kBigramJaccardAd] = jaccard(token_bigrams(tokens_a), token_bigrams(tokens_d));
  const auto tokens_q = word_tokens(context);
  f[kTokenOverlapQdJaccard] =
      jaccard(std::set<std::string>(tokens_q.begin(), tokens_q.end()), uni_d);
  f[kCharBigramJaccardAd] =
      jaccard(char_bigrams(folded_points(key)), char_bigrams(folded_points(candidate)));

  const WebScore web = web_search_score(stem, candidate, r);
  f[kWebSearchScore] = web.value;
  out.web_neutral = web.neutral;
  return out;
}

}  // namespace dkit
