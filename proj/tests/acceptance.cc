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


// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 when any
// criterion fails. Criterion 10 needs the released dataset and is skipped
// unless DKIT_RELEASED_DATASET points at it.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "dkit/corpus.h"
#include "dkit/csg.h"
#include "dkit/embeddings.h"
#include "dkit/features.h"
#include "dkit/metrics.h"
#include "dkit/ranker.h"
#include "dkit/search.h"
#include "dkit/selector.h"
#include "support/oracles.h"
#include "support/synthetic.h"

namespace dkit::acceptance {
namespace {

namespace fs = std::filesystem;
using testing::uniform_int;

struct Outcome {
  enum { kPass, kFail, kSkip } status = kPass;
  std::string detail;
};

Outcome fail(std::string why) { return {Outcome::kFail, std::move(why)}; }
Outcome skip(std::string why) { return {Outcome::kSkip, std::move(why)}; }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1 -------------------------------------------------------------------------
Outcome csg_oracle() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto w = testing::random_world(rng, 50);
    const int k = static_cast<int>(uniform_int(rng, 2, 6));
    const auto model = testing::random_topic_model(rng, k, testing::world_vocabulary(w, {"near", "here"}));
    const std::string key = w.edges[uniform_index(rng, w.edges.size())].instance;
    const std::string stem = "near " + w.instances[uniform_index(rng, w.instances.size())] + " ____ here";
    CsgConfig cfg;
    cfg.m = uniform_int(rng, 1, 30);
    cfg.concept_set_size = uniform_int(rng, 1, 20);
    const auto want = testing::oracle_csg(w.edges, model, stem, key, cfg);
    const auto wts = posterior_concepts(stem, key, w.taxonomy, model, cfg);
    const auto got = generate_candidates(stem, key, w.taxonomy, model, cfg);
    if (!want || !wts) return fail("trial " + std::to_string(trial) + ": empty result");
    if (wts->size() != want->concepts.size() || got.size() != want->candidates.size()) {
      return fail("trial " + std::to_string(trial) + ": size mismatch");
    }
    for (std::size_t i = 0; i < wts->size(); ++i) {
      if ((*wts)[i].concept_label != want->concepts[i].first) return fail("concept order");
      worst = std::max(worst, std::abs((*wts)[i].weight - want->concepts[i].second));
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got.candidates[i].surface != want->candidates[i].first) return fail("candidate order");
      worst = std::max(worst, std::abs(got.candidates[i].probability - want->candidates[i].second));
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "max |diff| " << worst << ", " << secs << " s";
  if (worst > 1e-9 || secs >= 10.0) return fail(d.str());
  return {Outcome::kPass, d.str()};
}

// 2 -------------------------------------------------------------------------
Outcome single_topic_collapse() {
  Rng rng(2002);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto w = testing::random_world(rng, 50);
    const auto model = testing::random_topic_model(rng, 1, testing::world_vocabulary(w));
    const std::string key = w.edges[uniform_index(rng, w.edges.size())].instance;
    CsgConfig cfg;
    cfg.prior_smoothing = trial % 2 ? 0.0 : 1.0;
    const auto pri = concepts_of(w.taxonomy, key, cfg.concept_set_size, cfg.prior_smoothing);
    const auto wts = posterior_concepts("a ____ b", key, w.taxonomy, model, cfg);
    if (!pri || !wts || pri->size() != wts->size()) return fail("size mismatch");
    double total = 0.0;
    for (const auto& p : *pri) total += p.prior;
    for (std::size_t i = 0; i < pri->size(); ++i) {
      if ((*wts)[i].concept_label != (*pri)[i].concept_label) return fail("order mismatch");
      worst = std::max(worst, std::abs((*wts)[i].weight - (*pri)[i].prior / total));
    }
  }
  std::ostringstream d;
  d << "max |diff| " << worst;
  if (worst > 1e-12) return fail(d.str());
  return {Outcome::kPass, d.str()};
}

// 3 -------------------------------------------------------------------------
Outcome feature_contract() {
  const auto t0 = Clock::now();
  Rng rng(3003);
  Embeddings emb(4);
  for (const char* w : {"a", "cat", "cats", "the", "of", "dna", "rna", "ion"}) {
    Eigen::VectorXd v(4);
    for (int i = 0; i < 4; ++i) v[i] = uniform01(rng) - 0.5;
    emb.add(w, v);
  }
  const WindowContextualEmbedder ctx(emb);
  FrequencyTable freq;
  freq.add("cat", 40);
  freq.add("the", 900);
  FeatureResources r;
  r.embeddings = &emb;
  r.contextual = &ctx;
  r.frequencies = &freq;
  for (int i = 0; i < 10000; ++i) {
    const std::string q = testing::random_text(rng) + " ____ " + testing::random_text(rng);
    const std::string a = testing::random_text(rng), d = testing::random_text(rng);
    const auto f = extract_features(q, a, d, r).values;
    const auto g = extract_features(q, d, a, r).values;
    if (f.size() != kNumFeatures) return fail("wrong length");
    for (int s = 0; s < kNumFeatures; ++s) {
      const std::string where = std::string(feature_names()[s]) + " for a='" + a + "' d='" + d + "'";
      if (!std::isfinite(f[s])) return fail("non-finite " + where);
      const auto [lo, hi] = feature_bounds(s);
      if (f[s] < lo || f[s] > hi) return fail("out of range " + where);
      const int t = swapped_feature(s);
      if (t >= 0 && f[s] != g[t]) return fail("asymmetric " + where);
    }
    if (f[kLcpAbs] > f[kLcsubseqAbs] || f[kLcsuffixAbs] > f[kLcsubseqAbs]) {
      return fail("prefix/suffix exceeds subsequence");
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "10000 triples, " << secs << " s";
  if (secs >= 30.0) return fail(d.str());
  return {Outcome::kPass, d.str()};
}

// 4 -------------------------------------------------------------------------
std::string random_string(Rng& rng) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", "A", "B", "x", "é", "中", " ", "-"};
  std::string s;
  const std::size_t n = uniform_int(rng, 0, 20);
  for (std::size_t i = 0; i < n; ++i) s += alphabet[uniform_index(rng, alphabet.size())];
  return s;
}

Outcome string_oracles() {
  Rng rng(4004);
  for (int i = 0; i < 1000; ++i) {
    const std::string a = random_string(rng), b = random_string(rng);
    if (edit_distance(a, b) != testing::oracle_edit_distance(a, b) ||
        longest_common_prefix_length(a, b) != testing::oracle_common_prefix(a, b) ||
        longest_common_suffix_length(a, b) != testing::oracle_common_suffix(a, b) ||
        longest_common_subsequence_length(a, b) != testing::oracle_lcs_subsequence(a, b)) {
      return fail("mismatch on '" + a + "' / '" + b + "'");
    }
  }
  return {Outcome::kPass, "1000 pairs exact"};
}

// 5 -------------------------------------------------------------------------
RankedList as_list(const std::vector<std::string>& s) {
  RankedList r;
  for (std::size_t i = 0; i < s.size(); ++i) r.entries.push_back({s[i], -static_cast<double>(i)});
  return r;
}

Outcome metric_oracles() {
  Rng rng(5005);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> universe;
    for (int i = 0; i < 25; ++i) universe.push_back("c" + std::to_string(i));
    shuffle(universe, rng);
    const std::size_t n = uniform_int(rng, 0, 15);
    const std::vector<std::string> ranked(universe.begin(), universe.begin() + static_cast<long>(n));
    std::set<std::string> gold;
    const std::size_t ng = uniform_int(rng, 1, 8);
    while (gold.size() < ng) gold.insert(universe[uniform_index(rng, universe.size())]);
    const GoldSet g(gold.begin(), gold.end());
    const auto rl = as_list(ranked);
    for (std::size_t k : {1u, 3u, 10u}) {
      const auto o = testing::oracle_metrics(ranked, gold, k, 10);
      for (double diff : {precision_at_k(rl, g, k) - o.p, recall_at_k(rl, g, k) - o.r,
                          f1_at_k(rl, g, k) - o.f1, mrr(rl, g) - o.mrr,
                          ndcg_at_k(rl, g, 10) - o.ndcg}) {
        worst = std::max(worst, std::abs(diff));
      }
    }
  }
  std::size_t perms = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = uniform_int(rng, 1, 6);
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < n; ++i) pool.push_back("p" + std::to_string(i));
    std::set<std::string> gold = {pool[uniform_index(rng, n)]};
    for (const auto& p : pool)
      if (uniform01(rng) < 0.4) gold.insert(p);
    const GoldSet g(gold.begin(), gold.end());
    double best = 0.0;
    do {
      ++perms;
      const double v = ndcg_at_k(as_list(pool), g, 10);
      bool lead = true;
      for (std::size_t i = 0; i < gold.size(); ++i) lead = lead && gold.count(pool[i]) > 0;
      if (v > 1.0 + 1e-12) return fail("NDCG above 1");
      if (lead != (std::abs(v - 1.0) <= 1e-12)) return fail("NDCG = 1 without leading hits");
      best = std::max(best, v);
    } while (std::next_permutation(pool.begin(), pool.end()));
    if (std::abs(best - 1.0) > 1e-12) return fail("permutation maximum is not 1");
  }
  std::ostringstream d;
  d << "500 instances, max |diff| " << worst << "; " << perms << " permutations";
  if (worst > 1e-12) return fail(d.str());
  return {Outcome::kPass, d.str()};
}

// 6 -------------------------------------------------------------------------
Outcome ranker_learns() {
  const auto t0 = Clock::now();
  Rng rng(6006);
  const auto train_groups = testing::separable_groups(rng, 40, 12, 9);
  const auto held_out = testing::separable_groups(rng, 40, 12, 9);
  std::ostringstream d;
  for (RankerKind kind : {RankerKind::kPointwiseBoost, RankerKind::kLambdaMartPairwise,
                          RankerKind::kLambdaMartListwise}) {
    TrainConfig cfg = default_train_config(kind);
    cfg.rounds = std::min(cfg.rounds, 200);
    TrainReport rep;
    const auto model = train(train_groups, kind, cfg, &rep);
    double p1 = 0.0;
    for (const auto& g : held_out) {
      const auto top = rank_rows(model, g.rows, 1);
      for (const auto& r : g.rows)
        if (r.surface == top.entries[0].surface) p1 += r.relevance;
    }
    p1 /= static_cast<double>(held_out.size());
    d << ranker_kind_name(kind) << " P@1=" << p1 << " ";
    if (p1 != 1.0) return fail(d.str());
    if (kind == RankerKind::kLambdaMartListwise) {
      d << "(NDCG@10 " << rep.ndcg_by_round.front() << " -> " << rep.ndcg_by_round.back() << ") ";
      if (rep.ndcg_by_round.back() < rep.ndcg_by_round.front()) return fail(d.str());
    }
  }
  const double secs = seconds_since(t0);
  d << secs << " s";
  if (secs >= 60.0) return fail(d.str());
  return {Outcome::kPass, d.str()};
}

// 7 -------------------------------------------------------------------------
// Each concept owns two instance suffixes and an embedding direction; gold
// distractors of a key are the same-concept instances sharing its suffix.
// CSG probabilities come from random counts that ignore suffixes.
struct Benchmark {
  Taxonomy taxonomy;
  TopicModel topics;
  Embeddings embeddings{8};
  Dataset train_set, test_set;
};

Benchmark make_benchmark(std::uint64_t seed) {
  Rng rng(seed);
  Benchmark b;
  const std::vector<std::string> suffixes = {"ase", "ine", "ium", "ode", "ule", "ant",
                                             "ose", "ide", "ite", "ery", "oid", "ure"};
  std::map<std::string, std::vector<std::string>> members;
  std::set<std::string> used;
  std::vector<std::string> vocab = {"reacts", "sample", "with", "the", "in"};
  for (int c = 0; c < 6; ++c) {
    const std::string concept_label = "class" + std::string(1, static_cast<char>('a' + c));
    Eigen::VectorXd dir(8);
    for (int i = 0; i < 8; ++i) dir[i] = uniform01(rng) - 0.5;
    vocab.push_back(concept_label);
    for (int i = 0; i < 14; ++i) {
      std::string name;
      do {
        name = testing::random_word(rng, 3, 5, "bcdfgklmnprstvz") + suffixes[2 * c + i % 2];
      } while (!used.insert(name).second);
      b.taxonomy.add_edge(concept_label, name, static_cast<std::int64_t>(uniform_int(rng, 1, 30)));
      b.taxonomy.add_pos(name, "NN");
      Eigen::VectorXd v = dir;
      for (int k = 0; k < 8; ++k) v[k] += 0.35 * (uniform01(rng) - 0.5);
      b.embeddings.add(name, v);
      members[concept_label].push_back(name);
      vocab.push_back(name);
    }
  }
  b.topics = testing::random_topic_model(rng, 3, vocab);
  std::vector<ClozeItem> items;
  for (const auto& [c, names] : members) {
    for (const auto& key : names) {
      std::vector<std::string> gold;
      for (const auto& other : names) {
        if (other != key && other.substr(other.size() - 3) == key.substr(key.size() - 3)) {
          gold.push_back(other);
        }
      }
      shuffle(gold, rng);
      gold.resize(std::min<std::size_t>(gold.size(), 3));
      items.push_back({"it-" + key, Domain::kScience, "the sample reacts with ____ .", key, gold});
    }
  }
  shuffle(items, rng);
  for (std::size_t i = 0; i < items.size(); ++i) {
    (i % 2 ? b.test_set : b.train_set).items.push_back(items[i]);
  }
  return b;
}

Outcome ranking_beats_csg() {
  std::ostringstream d;
  for (std::uint64_t seed : {71u, 72u, 73u}) {
    const Benchmark b = make_benchmark(seed);
    CsgConfig cc;
    const CandidateGenerator csg(b.taxonomy, b.topics, cc);
    FeatureResources fr;
    fr.embeddings = &b.embeddings;
    SelectorConfig sc;
    sc.seed = seed;
    const auto groups = build_training_groups(b.train_set, csg, fr, sc);
    const auto model = train(groups, RankerKind::kLambdaMartListwise,
                             default_train_config(RankerKind::kLambdaMartListwise));
    const DistractorSelector selector(csg, model, fr, sc);
    Run ranked, unranked;
    for (const auto& item : b.test_set.items) {
      ranked[item.id] = selector.rank(item.stem, item.key, 10);
      RankedList l;
      for (const auto& c : csg.generate(item.stem, item.key, 10).candidates) {
        l.entries.push_back({c.surface, c.probability});
      }
      unranked[item.id] = l;
    }
    const double ds = evaluate(ranked, b.test_set).metric("F1@3");
    const double base = evaluate(unranked, b.test_set).metric("F1@3");
    d << "seed " << seed << ": CSG+DS " << ds << " vs CSG " << base << "; ";
    if (!(ds > base)) return fail(d.str());
  }
  return {Outcome::kPass, d.str()};
}

// 8 -------------------------------------------------------------------------
Outcome web_score() {
  Embeddings emb(3);
  Eigen::VectorXd v(3);
  v << 1, 0, 0;
  emb.add("cells", v);
  v << 0, 1, 0;
  emb.add("contain", v);
  v << 0, 0.5, 1;
  emb.add("dna", v);
  v << 1, 1, 1;
  emb.add("water", v);
  FixtureSearchBackend verbatim;
  verbatim.add("cells contain dna", {{"cells contain dna", ""}});
  FixtureSearchBackend mixed;
  mixed.add("cells contain dna", {{"water contains cells", "cells contain dna in water"}});
  FixtureSearchBackend empty;
  FeatureResources r;
  r.embeddings = &emb;
  r.use_web_score = true;
  r.search = &mixed;
  const double first = web_search_score("cells contain ____", "dna", r).value;
  for (int i = 0; i < 2; ++i) {
    if (web_search_score("cells contain ____", "dna", r).value != first) return fail("not reproducible");
  }
  r.search = &verbatim;
  const double one = web_search_score("cells contain ____", "dna", r).value;
  r.search = &empty;
  const double half = web_search_score("cells contain ____", "dna", r).value;
  std::ostringstream d;
  d << "repeat " << first << ", verbatim " << one << ", empty " << half;
  if (one != 1.0 || half != 0.5) return fail(d.str());
  return {Outcome::kPass, d.str()};
}

// 9 -------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility() {
  const fs::path dir = fs::temp_directory_path() / ("dkit_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string base = std::string(DKIT_CLI_PATH) + " --config " + DKIT_TOY_DIR +
                           "/config.json --seed 5 ";
  std::vector<std::string> models, bodies;
  for (int run = 0; run < 2; ++run) {
    const fs::path model = dir / ("model" + std::to_string(run) + ".json");
    const fs::path out = dir / ("gen" + std::to_string(run) + ".json");
    const std::string train = base + "train --dataset " + DKIT_TOY_DIR + "/dataset.jsonl --out " +
                              model.string() + " > /dev/null 2>&1";
    if (std::system(train.c_str()) != 0) return fail("train failed");
    const std::string gen = base + "--model " + model.string() +
                            " generate --stem \"Plants produce ____ that we breathe .\" --key oxygen -n 5 > " +
                            out.string() + " 2>/dev/null";
    if (std::system(gen.c_str()) != 0) return fail("generate failed");
    models.push_back(slurp(model));
    bodies.push_back(slurp(out));
  }
  fs::remove_all(dir);
  if (models[0].empty() || models[0] != models[1]) return fail("model files differ");
  if (bodies[0].empty() || bodies[0] != bodies[1]) return fail("response bodies differ");
  return {Outcome::kPass, "model " + std::to_string(models[0].size()) + " bytes, body " +
                              std::to_string(bodies[0].size()) + " bytes identical"};
}

// 10 ------------------------------------------------------------------------
Outcome released_dataset() {
  const char* path = std::getenv("DKIT_RELEASED_DATASET");
  if (!path || !fs::exists(path)) return skip("set DKIT_RELEASED_DATASET to the released dataset file");
  const auto data = load_dataset(path).dataset;
  const auto s = dataset_stats(data);
  auto count = [&](Domain d) {
    auto it = s.per_domain.find(d);
    return it == s.per_domain.end() ? std::size_t{0} : it->second.items;
  };
  std::ostringstream d;
  d << s.total << " items, " << count(Domain::kScience) << "/" << count(Domain::kVocabulary) << "/"
    << count(Domain::kCommonSense) << "/" << count(Domain::kTrivia) << ", mean "
    << s.mean_distractors;
  if (s.total != 2880 || count(Domain::kScience) != 758 || count(Domain::kVocabulary) != 956 ||
      count(Domain::kCommonSense) != 706 || count(Domain::kTrivia) != 460 ||
      std::abs(s.mean_distractors - 3.13) > 0.005) {
    return fail(d.str());
  }
  return {Outcome::kPass, d.str()};
}

// 11 ------------------------------------------------------------------------
Outcome importance() {
  Rng rng(1111);
  const auto groups = testing::separable_groups(rng, 40, 10, 17, 3);
  std::ostringstream d;
  for (RankerKind kind : {RankerKind::kPointwiseBoost, RankerKind::kLambdaMartPairwise,
                          RankerKind::kLambdaMartListwise}) {
    const auto imp = feature_importance(train(groups, kind, default_train_config(kind)));
    double sum = 0.0;
    for (const auto& [n, v] : imp) sum += v;
    d << ranker_kind_name(kind) << " top=" << imp[0].first << " sum=" << sum << " ";
    if (imp[0].first != feature_names()[17] || std::abs(sum - 1.0) > 1e-9) return fail(d.str());
  }
  return {Outcome::kPass, d.str()};
}

}  // namespace
}  // namespace dkit::acceptance

int main() {
  using namespace dkit::acceptance;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 CSG matches brute-force oracle", csg_oracle},
      {"2 single-topic collapse to priors", single_topic_collapse},
      {"3 feature-vector contract (10k fuzz)", feature_contract},
      {"4 string-feature DP oracles", string_oracles},
      {"5 metric oracles and NDCG maximality", metric_oracles},
      {"6 rankers learn separable data", ranker_learns},
      {"7 CSG+DS beats CSG-only F1@3", ranking_beats_csg},
      {"8 web-search score determinism", web_score},
      {"9 train/generate reproducibility", reproducibility},
      {"10 released dataset statistics", released_dataset},
      {"11 feature importance sanity", importance},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Outcome::kPass ? "PASS" : o.status == Outcome::kFail ? "FAIL" : "SKIP";
    failures += o.status == Outcome::kFail;
    std::cout << tag << "  " << name << "  (" << o.detail << ")" << std::endl;
  }
  return failures ? 1 : 0;
}
