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


// Reference implementations used as test oracles. They are written
// directly from the definitions, favouring clarity over speed, and share no
// code with the library beyond topic fold-in.

#ifndef DKIT_TESTS_SUPPORT_ORACLES_H_
#define DKIT_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dkit/csg.h"
#include "dkit/topics.h"
#include "support/synthetic.h"

namespace dkit::testing {

// ---- strings --------------------------------------------------------------

inline std::u32string fold32(const std::string& s) {
  std::u32string out;
  // Minimal UTF-8 decoder; malformed input never occurs in oracle tests.
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    char32_t cp;
    std::size_t len;
    if (c < 0x80) {
      cp = c, len = 1;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1F, len = 2;
    } else if ((c >> 4) == 0xE) {
      cp = c & 0x0F, len = 3;
    } else {
      cp = c & 0x07, len = 4;
    }
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    if (cp >= 'A' && cp <= 'Z') cp += 'a' - 'A';
    out.push_back(cp);
    i += len;
  }
  return out;
}

// Full (n+1) x (m+1) Levenshtein table.
inline int oracle_edit_distance(const std::string& a, const std::string& b) {
  const auto x = fold32(a), y = fold32(b);
  std::vector<std::vector<int>> d(x.size() + 1, std::vector<int>(y.size() + 1));
  for (std::size_t i = 0; i <= x.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= y.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    for (std::size_t j = 1; j <= y.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
  }
  return d[x.size()][y.size()];
}

inline int oracle_lcs_subsequence(const std::string& a, const std::string& b) {
  const auto x = fold32(a), y = fold32(b);
  std::vector<std::vector<int>> L(x.size() + 1, std::vector<int>(y.size() + 1, 0));
  for (std::size_t i = 1; i <= x.size(); ++i) {
    for (std::size_t j = 1; j <= y.size(); ++j) {
      L[i][j] = x[i - 1] == y[j - 1] ? L[i - 1][j - 1] + 1 : std::max(L[i - 1][j], L[i][j - 1]);
    }
  }
  return L[x.size()][y.size()];
}

// Longest k such that the first (or last) k code points agree.
inline int oracle_common_prefix(const std::string& a, const std::string& b) {
  const auto x = fold32(a), y = fold32(b);
  int best = 0;
  for (std::size_t k = 1; k <= std::min(x.size(), y.size()); ++k) {
    if (x.substr(0, k) == y.substr(0, k)) best = static_cast<int>(k);
  }
  return best;
}

inline int oracle_common_suffix(const std::string& a, const std::string& b) {
  const auto x = fold32(a), y = fold32(b);
  int best = 0;
  for (std::size_t k = 1; k <= std::min(x.size(), y.size()); ++k) {
    if (x.substr(x.size() - k) == y.substr(y.size() - k)) best = static_cast<int>(k);
  }
  return best;
}

// ---- candidate set generation ----------------------------------------------

inline std::vector<std::string> oracle_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct OracleCsg {
  std::vector<std::pair<std::string, double>> concepts;    // w(c), sorted
  std::vector<std::pair<std::string, double>> candidates;  // p(d), sorted
};

inline void oracle_sort(std::vector<std::pair<std::string, double>>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
}

// Labels in `edges` are assumed normalized (lowercase, single spaces).
inline std::optional<OracleCsg> oracle_csg(const std::vector<Edge>& edges, const TopicModel& model,
                                           const std::string& stem, const std::string& key,
                                           const CsgConfig& cfg) {
  std::map<std::string, double> key_counts;
  std::map<std::string, std::map<std::string, double>> members;
  for (const auto& e : edges) {
    members[e.concept_label][e.instance] += static_cast<double>(e.count);
    if (e.instance == key) key_counts[e.concept_label] += static_cast<double>(e.count);
  }
  if (key_counts.empty()) return std::nullopt;

  double total = 0.0;
  for (const auto& [c, n] : key_counts) total += n;
  std::vector<std::pair<std::string, double>> priors;
  const double a = cfg.prior_smoothing;
  for (const auto& [c, n] : key_counts) {
    priors.push_back({c, (n + a) / (total + a * static_cast<double>(key_counts.size()))});
  }
  oracle_sort(priors);
  if (priors.size() > cfg.concept_set_size) priors.resize(cfg.concept_set_size);

  std::string completed = stem;
  completed.replace(completed.find("____"), 4, key);
  const TopicDistribution pi = infer_topics(model, topic_tokens(completed), cfg.fold_in);

  OracleCsg out;
  double wsum = 0.0;
  for (const auto& [c, prior] : priors) {
    std::vector<std::pair<std::string, double>> insts(members[c].begin(), members[c].end());
    oracle_sort(insts);
    TokenList doc = topic_tokens(c);
    for (std::size_t i = 0; i < insts.size() && i < cfg.top_instances; ++i) {
      for (auto& t : topic_tokens(insts[i].first)) doc.push_back(t);
    }
    const TopicDistribution gamma = infer_topics(model, doc, cfg.fold_in);
    double overlap = 0.0;
    for (Eigen::Index k = 0; k < pi.size(); ++k) overlap += pi[k] * gamma[k];
    out.concepts.push_back({c, prior * overlap});
    wsum += prior * overlap;
  }
  if (!(wsum > 0.0)) {
    wsum = 0.0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
      out.concepts[i].second = priors[i].second;
      wsum += priors[i].second;
    }
  }
  for (auto& [c, w] : out.concepts) w /= wsum;
  oracle_sort(out.concepts);

  const auto stem_words = oracle_words(stem);
  auto excluded = [&](const std::string& d) {
    if (d == key) return true;
    const auto dw = oracle_words(d);
    for (std::size_t i = 0; i + dw.size() <= stem_words.size(); ++i) {
      if (std::equal(dw.begin(), dw.end(), stem_words.begin() + static_cast<std::ptrdiff_t>(i))) {
        return true;
      }
    }
    return false;
  };
  std::map<std::string, double> mass;
  const double b = cfg.typicality_smoothing;
  for (const auto& [c, w] : out.concepts) {
    double csum = 0.0;
    for (const auto& [i, n] : members[c]) csum += n;
    for (const auto& [i, n] : members[c]) {
      mass[i] += (n + b) / (csum + b * static_cast<double>(members[c].size())) * w;
    }
  }
  for (const auto& [d, p] : mass) {
    if (!excluded(d)) out.candidates.push_back({d, p});
  }
  oracle_sort(out.candidates);
  if (out.candidates.size() > cfg.m) out.candidates.resize(cfg.m);
  double psum = 0.0;
  for (const auto& [d, p] : out.candidates) psum += p;
  for (auto& [d, p] : out.candidates) p /= psum;
  return out;
}

// ---- taxonomy paths --------------------------------------------------------

// All-pairs shortest paths over the undirected is-A graph (Floyd-Warshall).
inline std::map<std::pair<std::string, std::string>, int> oracle_hops(const std::vector<Edge>& edges) {
  std::set<std::string> nodes;
  for (const auto& e : edges) nodes.insert({e.concept_label, e.instance});
  std::vector<std::string> id(nodes.begin(), nodes.end());
  const std::size_t n = id.size();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  auto ix = [&](const std::string& s) {
    return static_cast<std::size_t>(std::lower_bound(id.begin(), id.end(), s) - id.begin());
  };
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) {
    d[ix(e.concept_label)][ix(e.instance)] = 1;
    d[ix(e.instance)][ix(e.concept_label)] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::map<std::pair<std::string, std::string>, int> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d[i][j] < inf) out[{id[i], id[j]}] = d[i][j];
  return out;
}

// ---- ranking metrics -------------------------------------------------------

struct OracleMetrics {
  double p = 0, r = 0, f1 = 0, mrr = 0, ndcg = 0;
};

// Gold strings and ranked surfaces are compared exactly (callers pass
// lowercase data); duplicates in `ranked` are not expected.
inline OracleMetrics oracle_metrics(const std::vector<std::string>& ranked,
                                    const std::set<std::string>& gold, std::size_t k,
                                    std::size_t ndcg_k) {
  OracleMetrics m;
  double hits = 0;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) hits += gold.count(ranked[i]);
  m.p = hits / static_cast<double>(k);
  m.r = gold.empty() ? 0.0 : hits / static_cast<double>(gold.size());
  m.f1 = m.p + m.r > 0 ? 2 * m.p * m.r / (m.p + m.r) : 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (gold.count(ranked[i])) {
      m.mrr = 1.0 / static_cast<double>(i + 1);
      break;
    }
  }
  if (!gold.empty()) {
    double dcg = 0, idcg = 0;
    for (std::size_t i = 0; i < std::min(ndcg_k, ranked.size()); ++i) {
      const double rel = gold.count(ranked[i]) ? 1.0 : 0.0;
      dcg += (std::pow(2.0, rel) - 1.0) / std::log2(static_cast<double>(i + 1) + 1.0);
    }
    for (std::size_t i = 0; i < std::min(ndcg_k, gold.size()); ++i) {
      idcg += 1.0 / std::log2(static_cast<double>(i + 1) + 1.0);
    }
    m.ndcg = dcg / idcg;
  }
  return m;
}

}  // namespace dkit::testing

#endif  // DKIT_TESTS_SUPPORT_ORACLES_H_
