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

#include "dkit/ranker.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "dkit/error.h"
#include "dkit/text.h"

namespace dkit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Group files.

void write_groups(const std::vector<RankGroup>& groups, std::ostream& out) {
  for (const auto& g : groups) {
    for (const auto& row : g.rows) {
      json j;
      j["item_id"] = g.item_id;
      j["surface"] = row.surface;
      j["relevance"] = row.relevance;
      j["features"] = std::vector<double>(row.features.data(),
                                          row.features.data() + kNumFeatures);
      out << j.dump() << '\n';
    }
  }
}

void save_groups(const std::vector<RankGroup>& groups, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  write_groups(groups, out);
}

std::vector<RankGroup> read_groups(std::istream& in, const std::string& source) {
  std::vector<RankGroup> groups;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    RankRow row;
    std::string item_id;
    try {
      const json j = json::parse(line);
      const json& id = j.at("item_id");
      item_id = id.is_string() ? id.get<std::string>() : id.dump();
      row.surface = j.at("surface").get<std::string>();
      row.relevance = j.at("relevance").get<int>();
      const auto values = j.at("features").get<std::vector<double>>();
      if (values.size() != static_cast<std::size_t>(kNumFeatures)) {
        throw ParseError(where + ": expected " + std::to_string(kNumFeatures) +
                         " features, got " + std::to_string(values.size()));
      }
      for (int i = 0; i < kNumFeatures; ++i) row.features[i] = values[static_cast<std::size_t>(i)];
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (row.relevance != 0 && row.relevance != 1) {
      throw ParseError(where + ": relevance must be 0 or 1");
    }
    auto [it, inserted] = index.emplace(item_id, groups.size());
    if (inserted) groups.push_back({item_id, {}});
    groups[it->second].rows.push_back(std::move(row));
  }
  return groups;
}

std::vector<RankGroup> load_groups(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open training groups: " + path);
  return read_groups(in, path);
}

// ---------------------------------------------------------------------------
// Model types.

std::string_view ranker_kind_name(RankerKind kind) {
  switch (kind) {
    case RankerKind::kPointwiseBoost:
      return "pointwise_boost";
    case RankerKind::kLambdaMartPairwise:
      return "lambdamart_pairwise";
    case RankerKind::kLambdaMartListwise:
      return "lambdamart_listwise";
  }
  return "lambdamart_listwise";
}

RankerKind parse_ranker_kind(std::string_view name) {
  if (name == "pointwise_boost" || name == "pointwise") return RankerKind::kPointwiseBoost;
  if (name == "lambdamart_pairwise" || name == "pairwise") return RankerKind::kLambdaMartPairwise;
  if (name == "lambdamart_listwise" || name == "listwise") return RankerKind::kLambdaMartListwise;
  throw ConfigError("unknown ranker kind '" + std::string(name) + "'");
}

double RegressionTree::predict(const FeatureVector& x) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const TreeNode& n = nodes[static_cast<std::size_t>(node)];
    node = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

bool RegressionTree::has_split() const {
  return !nodes.empty() && nodes[0].feature >= 0;
}

TrainConfig default_train_config(RankerKind kind) {
  TrainConfig cfg;
  if (kind == RankerKind::kPointwiseBoost) {
    cfg.rounds = 100;
    cfg.max_leaves = 2;
    cfg.min_rows_per_leaf = 1;
    cfg.learning_rate = 1.0;
  }
  return cfg;
}

RankModel::RankModel(RankerKind kind, std::vector<RegressionTree> trees,
                     TrainConfig cfg, int schema_version)
    : kind_(kind),
      trees_(std::move(trees)),
      config_(cfg),
      schema_version_(schema_version) {}

double RankModel::score(const FeatureVector& x) const {
  double s = 0.0;
  for (const auto& t : trees_) s += t.weight * t.predict(x);
  return s;
}

json RankModel::to_json() const {
  json j;
  j["format_version"] = kRankModelFormatVersion;
  j["kind"] = std::string(ranker_kind_name(kind_));
  j["schema_version"] = schema_version_;
  std::vector<std::string> names;
  for (auto n : feature_names()) names.emplace_back(n);
  j["feature_names"] = names;
  j["config"] = {{"rounds", config_.rounds},
                 {"learning_rate", config_.learning_rate},
                 {"max_leaves", config_.max_leaves},
                 {"min_rows_per_leaf", config_.min_rows_per_leaf},
                 {"seed", config_.seed},
                 {"ndcg_truncation", config_.ndcg_truncation},
                 {"max_bins", config_.max_bins}};
  json trees = json::array();
  for (const auto& t : trees_) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"value", n.value},
                       {"gain", n.gain}});
    }
    trees.push_back({{"weight", t.weight}, {"nodes", nodes}});
  }
  j["trees"] = trees;
  return j;
}

RankModel RankModel::from_json(const json& j) {
  try {
    if (j.at("format_version").get<int>() != kRankModelFormatVersion) {
      throw ParseError("unsupported model format_version");
    }
    const RankerKind kind = parse_ranker_kind(j.at("kind").get<std::string>());
    const int schema = j.at("schema_version").get<int>();
    TrainConfig cfg;
    const json& c = j.at("config");
    cfg.rounds = c.at("rounds").get<int>();
    cfg.learning_rate = c.at("learning_rate").get<double>();
    cfg.max_leaves = c.at("max_leaves").get<int>();
    cfg.min_rows_per_leaf = c.at("min_rows_per_leaf").get<int>();
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.ndcg_truncation = c.value("ndcg_truncation", 10);
    cfg.max_bins = c.value("max_bins", 256);
    std::vector<RegressionTree> trees;
    for (const auto& t : j.at("trees")) {
      RegressionTree tree;
      tree.weight = t.at("weight").get<double>();
      for (const auto& n : t.at("nodes")) {
        TreeNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.value = n.at("value").get<double>();
        node.gain = n.value("gain", 0.0);
        tree.nodes.push_back(node);
      }
      // Structural check so predict() cannot walk out of bounds.
      const int size = static_cast<int>(tree.nodes.size());
      if (size == 0) throw ParseError("tree without nodes");
      for (const auto& node : tree.nodes) {
        if (node.feature >= kNumFeatures) throw ParseError("feature index out of range");
        if (node.feature >= 0 && (node.left <= 0 || node.left >= size ||
                                  node.right <= 0 || node.right >= size)) {
          throw ParseError("tree child index out of range");
        }
      }
      trees.push_back(std::move(tree));
    }
    if (trees.empty()) throw ParseError("model has no trees");
    return RankModel(kind, std::move(trees), cfg, schema);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad ranking model: ") + e.what());
  }
}

std::string RankModel::serialize() const { return to_json().dump(1) + "\n"; }

std::string RankModel::model_id() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(stable_hash(to_json().dump())));
  return std::string(ranker_kind_name(kind_)) + "-" + std::string(buf).substr(0, 10);
}

void RankModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + path);
  out << serialize();
}

RankModel RankModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open ranking model: " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Training.

namespace {

struct FlatData {
  std::vector<FeatureVector> x;
  std::vector<int> y;
  std::vector<std::size_t> group_begin;  // size groups + 1
  std::vector<const std::string*> surface;
};

FlatData flatten(const std::vector<RankGroup>& groups) {
  FlatData d;
  d.group_begin.push_back(0);
  for (const auto& g : groups) {
    for (const auto& row : g.rows) {
      d.x.push_back(row.features);
      d.y.push_back(row.relevance);
      d.surface.push_back(&row.surface);
    }
    d.group_begin.push_back(d.x.size());
  }
  return d;
}

// Per-feature split candidates and each row's bin: bin b holds values
// v <= thresholds[b] (and > thresholds[b - 1]).
struct Binned {
  std::vector<std::vector<double>> thresholds;
  std::vector<std::vector<std::uint16_t>> bins;  // [feature][row]
};

Binned bin_features(const std::vector<FeatureVector>& x, int max_bins) {
  Binned b;
  b.thresholds.resize(kNumFeatures);
  b.bins.resize(kNumFeatures);
  const std::size_t n = x.size();
  std::vector<double> values(n);
  for (int f = 0; f < kNumFeatures; ++f) {
    for (std::size_t i = 0; i < n; ++i) values[i] = x[i][f];
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, std::size_t>> uniq;  // value, count
    for (double v : sorted) {
      if (uniq.empty() || uniq.back().first != v) {
        uniq.emplace_back(v, 1);
      } else {
        ++uniq.back().second;
      }
    }
    auto& thr = b.thresholds[static_cast<std::size_t>(f)];
    auto midpoint = [](double lo, double hi) {
      const double m = lo + (hi - lo) / 2.0;
      return m < hi ? m : lo;
    };
    if (uniq.size() <= static_cast<std::size_t>(max_bins)) {
      for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
        thr.push_back(midpoint(uniq[i].first, uniq[i + 1].first));
      }
    } else {
      std::size_t cumulative = 0;
      std::size_t next_bin = 1;
      for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
        cumulative += uniq[i].second;
        if (cumulative * static_cast<std::size_t>(max_bins) >= next_bin * n) {
          thr.push_back(midpoint(uniq[i].first, uniq[i + 1].first));
          while (cumulative * static_cast<std::size_t>(max_bins) >= next_bin * n) ++next_bin;
        }
      }
    }
    auto& rows = b.bins[static_cast<std::size_t>(f)];
    rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i] = static_cast<std::uint16_t>(
          std::lower_bound(thr.begin(), thr.end(), values[i]) - thr.begin());
    }
  }
  return b;
}

struct SplitChoice {
  int feature = -1;
  std::size_t bin = 0;
  double gain = 0.0;
};

// Least-squares split of `rows` on targets g.
SplitChoice best_ls_split(const Binned& b, const std::vector<std::size_t>& rows,
                          const std::vector<double>& g, int min_rows) {
  SplitChoice best;
  const double n = static_cast<double>(rows.size());
  if (rows.size() < static_cast<std::size_t>(2 * min_rows)) return best;
  double total = 0.0;
  for (std::size_t r : rows) total += g[r];
  const double base = total * total / n;
  std::vector<double> sum;
  std::vector<std::size_t> cnt;
  for (int f = 0; f < kNumFeatures; ++f) {
    const auto& thr = b.thresholds[static_cast<std::size_t>(f)];
    if (thr.empty()) continue;
    const auto& bins = b.bins[static_cast<std::size_t>(f)];
    sum.assign(thr.size() + 1, 0.0);
    cnt.assign(thr.size() + 1, 0);
    for (std::size_t r : rows) {
      sum[bins[r]] += g[r];
      ++cnt[bins[r]];
    }
    double left_sum = 0.0;
    std::size_t left_n = 0;
    for (std::size_t k = 0; k < thr.size(); ++k) {
      left_sum += sum[k];
      left_n += cnt[k];
      const std::size_t right_n = rows.size() - left_n;
      if (left_n < static_cast<std::size_t>(min_rows) ||
          right_n < static_cast<std::size_t>(min_rows)) {
        continue;
      }
      const double right_sum = total - left_sum;
      const double gain = left_sum * left_sum / static_cast<double>(left_n) +
                          right_sum * right_sum / static_cast<double>(right_n) - base;
      if (gain > best.gain + 1e-12) best = {f, k, gain};
    }
  }
  return best;
}

// Leaf-wise growth; leaf values are Newton steps sum(g) / sum(h).
RegressionTree grow_tree(const Binned& b, const std::vector<double>& g,
                         const std::vector<double>& h, const TrainConfig& cfg) {
  const std::size_t n = g.size();
  struct Leaf {
    int node;
    std::vector<std::size_t> rows;
    SplitChoice split;
  };
  RegressionTree tree;
  tree.nodes.push_back(TreeNode{});
  std::vector<Leaf> leaves;
  {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    Leaf root{0, std::move(all), {}};
    root.split = best_ls_split(b, root.rows, g, cfg.min_rows_per_leaf);
    leaves.push_back(std::move(root));
  }
  int num_leaves = 1;
  while (num_leaves < cfg.max_leaves) {
    std::size_t pick = leaves.size();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i].split.feature < 0) continue;
      if (pick == leaves.size() || leaves[i].split.gain > leaves[pick].split.gain) pick = i;
    }
    if (pick == leaves.size()) break;
    Leaf parent = std::move(leaves[pick]);
    leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));

    const auto f = static_cast<std::size_t>(parent.split.feature);
    const auto& bins = b.bins[f];
    Leaf left{static_cast<int>(tree.nodes.size()), {}, {}};
    Leaf right{static_cast<int>(tree.nodes.size() + 1), {}, {}};
    for (std::size_t r : parent.rows) {
      (bins[r] <= parent.split.bin ? left.rows : right.rows).push_back(r);
    }
    TreeNode& node = tree.nodes[static_cast<std::size_t>(parent.node)];
    node.feature = parent.split.feature;
    node.threshold = b.thresholds[f][parent.split.bin];
    node.left = left.node;
    node.right = right.node;
    node.gain = parent.split.gain / static_cast<double>(n);
    tree.nodes.push_back(TreeNode{});
    tree.nodes.push_back(TreeNode{});
    left.split = best_ls_split(b, left.rows, g, cfg.min_rows_per_leaf);
    right.split = best_ls_split(b, right.rows, g, cfg.min_rows_per_leaf);
    leaves.push_back(std::move(left));
    leaves.push_back(std::move(right));
    ++num_leaves;
  }
  for (const auto& leaf : leaves) {
    double gs = 0.0, hs = 0.0;
    for (std::size_t r : leaf.rows) {
      gs += g[r];
      hs += h[r];
    }
    tree.nodes[static_cast<std::size_t>(leaf.node)].value = hs > 1e-12 ? gs / hs : 0.0;
  }
  return tree;
}

double discount(std::size_t rank0) {  // rank0 is 0-based
  return 1.0 / std::log2(static_cast<double>(rank0) + 2.0);
}

// Row order of one group by descending score, ties by surface.
std::vector<std::size_t> group_order(const FlatData& d, std::size_t begin,
                                     std::size_t end,
                                     const std::vector<double>& scores) {
  std::vector<std::size_t> order(end - begin);
  std::iota(order.begin(), order.end(), begin);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return *d.surface[a] < *d.surface[b];
  });
  return order;
}

double ideal_dcg(std::size_t positives, int k) {
  double idcg = 0.0;
  for (std::size_t r = 0; r < positives && r < static_cast<std::size_t>(k); ++r) {
    idcg += discount(r);
  }
  return idcg;
}

double flat_mean_ndcg(const FlatData& d, const std::vector<double>& scores, int k) {
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t gi = 0; gi + 1 < d.group_begin.size(); ++gi) {
    const std::size_t b = d.group_begin[gi], e = d.group_begin[gi + 1];
    std::size_t positives = 0;
    for (std::size_t r = b; r < e; ++r) positives += d.y[r] > 0;
    if (positives == 0) continue;
    const auto order = group_order(d, b, e, scores);
    double dcg = 0.0;
    for (std::size_t r = 0; r < order.size() && r < static_cast<std::size_t>(k); ++r) {
      if (d.y[order[r]] > 0) dcg += discount(r);
    }
    total += dcg / ideal_dcg(positives, k);
    ++counted;
  }
  return counted ? total / static_cast<double>(counted) : 0.0;
}

void lambda_gradients(const FlatData& d, const std::vector<double>& scores,
                      bool listwise, int k, std::vector<double>& g,
                      std::vector<double>& h) {
  std::fill(g.begin(), g.end(), 0.0);
  std::fill(h.begin(), h.end(), 0.0);
  std::vector<std::size_t> rank_of(scores.size());
  for (std::size_t gi = 0; gi + 1 < d.group_begin.size(); ++gi) {
    const std::size_t b = d.group_begin[gi], e = d.group_begin[gi + 1];
    std::size_t positives = 0;
    for (std::size_t r = b; r < e; ++r) positives += d.y[r] > 0;
    if (positives == 0 || positives == e - b) continue;
    const auto order = group_order(d, b, e, scores);
    for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = r;
    const double idcg = ideal_dcg(positives, k);
    for (std::size_t i = b; i < e; ++i) {
      if (d.y[i] <= 0) continue;
      for (std::size_t j = b; j < e; ++j) {
        if (d.y[j] > 0) continue;
        double delta = 1.0;
        if (listwise) {
          const double di = rank_of[i] < static_cast<std::size_t>(k) ? discount(rank_of[i]) : 0.0;
          const double dj = rank_of[j] < static_cast<std::size_t>(k) ? discount(rank_of[j]) : 0.0;
          delta = std::abs(di - dj) / idcg;
          if (delta == 0.0) continue;
        }
        const double rho = 1.0 / (1.0 + std::exp(scores[i] - scores[j]));
        const double lambda = delta * rho;
        const double hess = delta * rho * (1.0 - rho);
        g[i] += lambda;
        g[j] -= lambda;
        h[i] += hess;
        h[j] += hess;
      }
    }
  }
}

RankModel train_lambdamart(const FlatData& d, const Binned& b, bool listwise,
                           const TrainConfig& cfg, RankerKind kind,
                           TrainReport* report) {
  const std::size_t n = d.x.size();
  std::vector<double> scores(n, 0.0), g(n), h(n);
  std::vector<RegressionTree> trees;
  for (int round = 0; round < cfg.rounds; ++round) {
    lambda_gradients(d, scores, listwise, cfg.ndcg_truncation, g, h);
    RegressionTree tree = grow_tree(b, g, h, cfg);
    tree.weight = cfg.learning_rate;
    for (std::size_t i = 0; i < n; ++i) scores[i] += tree.weight * tree.predict(d.x[i]);
    trees.push_back(std::move(tree));
    if (report) report->ndcg_by_round.push_back(flat_mean_ndcg(d, scores, cfg.ndcg_truncation));
  }
  return RankModel(kind, std::move(trees), cfg);
}

double gini(double pos, double total) {
  if (total <= 0) return 0.0;
  const double p = pos / total;
  return 2.0 * p * (1.0 - p);
}

RankModel train_boosted_stumps(const FlatData& d, const Binned& b,
                               const TrainConfig& cfg) {
  const std::size_t n = d.x.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<RegressionTree> trees;
  std::vector<double> pos_w, neg_w;
  for (int round = 0; round < cfg.rounds; ++round) {
    double total_pos = 0.0, total_neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) (d.y[i] > 0 ? total_pos : total_neg) += w[i];

    // Stump: x <= threshold predicts -polarity, otherwise +polarity.
    int best_f = -1;
    std::size_t best_bin = 0;
    int best_polarity = 1;
    double best_err = 2.0;
    double best_left_pos = 0.0, best_left_neg = 0.0;
    for (int f = 0; f < kNumFeatures; ++f) {
      const auto& thr = b.thresholds[static_cast<std::size_t>(f)];
      if (thr.empty()) continue;
      const auto& bins = b.bins[static_cast<std::size_t>(f)];
      pos_w.assign(thr.size() + 1, 0.0);
      neg_w.assign(thr.size() + 1, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        (d.y[i] > 0 ? pos_w : neg_w)[bins[i]] += w[i];
      }
      double left_pos = 0.0, left_neg = 0.0;
      for (std::size_t k = 0; k < thr.size(); ++k) {
        left_pos += pos_w[k];
        left_neg += neg_w[k];
        const double err_up = left_pos + (total_neg - left_neg);  // polarity +1
        const double err_down = left_neg + (total_pos - left_pos);  // polarity -1
        if (err_up < best_err - 1e-15) {
          best_err = err_up;
          best_f = f;
          best_bin = k;
          best_polarity = 1;
          best_left_pos = left_pos;
          best_left_neg = left_neg;
        }
        if (err_down < best_err - 1e-15) {
          best_err = err_down;
          best_f = f;
          best_bin = k;
          best_polarity = -1;
          best_left_pos = left_pos;
          best_left_neg = left_neg;
        }
      }
    }
    if (best_f < 0) break;  // every feature constant
    if (best_err >= 0.5 && !trees.empty()) break;

    const double err = std::clamp(best_err, 1e-10, 1.0 - 1e-10);
    const double alpha = 0.5 * std::log((1.0 - err) / err);

    RegressionTree stump;
    TreeNode root;
    root.feature = best_f;
    root.threshold = b.thresholds[static_cast<std::size_t>(best_f)][best_bin];
    root.left = 1;
    root.right = 2;
    const double total = total_pos + total_neg;
    const double left_total = best_left_pos + best_left_neg;
    const double right_total = total - left_total;
    root.gain = std::max(0.0, total * gini(total_pos, total) -
                                  left_total * gini(best_left_pos, left_total) -
                                  right_total * gini(total_pos - best_left_pos, right_total));
    TreeNode left_leaf, right_leaf;
    left_leaf.value = -best_polarity;
    right_leaf.value = best_polarity;
    stump.nodes = {root, left_leaf, right_leaf};
    stump.weight = alpha;

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = d.y[i] > 0 ? 1.0 : -1.0;
      w[i] *= std::exp(-alpha * y * stump.predict(d.x[i]));
      norm += w[i];
    }
    for (double& wi : w) wi /= norm;
    trees.push_back(std::move(stump));
    if (best_err <= 1e-10) break;  // perfect separation; further stumps repeat it
  }
  if (trees.empty()) {
    throw Error("no_split", "no feature varies across training rows");
  }
  return RankModel(RankerKind::kPointwiseBoost, std::move(trees), cfg);
}

void validate(const TrainConfig& cfg, RankerKind kind) {
  if (cfg.rounds < 1) throw ConfigError("rounds must be >= 1");
  if (!(cfg.learning_rate > 0)) throw ConfigError("learning_rate must be > 0");
  if (kind != RankerKind::kPointwiseBoost && cfg.max_leaves < 2) {
    throw ConfigError("max_leaves must be >= 2");
  }
  if (cfg.min_rows_per_leaf < 1) throw ConfigError("min_rows_per_leaf must be >= 1");
  if (cfg.ndcg_truncation < 1) throw ConfigError("ndcg_truncation must be >= 1");
  if (cfg.max_bins < 2 || cfg.max_bins > 65535) throw ConfigError("max_bins out of range");
}

}  // namespace

RankModel train(const std::vector<RankGroup>& groups, RankerKind kind,
                const TrainConfig& cfg, TrainReport* report) {
  validate(cfg, kind);
  const FlatData d = flatten(groups);
  std::size_t positives = 0;
  for (int y : d.y) positives += y > 0;
  if (positives == 0) {
    throw Error("single_class", "training data has no positive rows (relevance 1)");
  }
  if (positives == d.y.size()) {
    throw Error("single_class", "training data has no negative rows (relevance 0)");
  }
  if (report) {
    report->rows = d.x.size();
    report->groups = groups.size();
  }
  const Binned b = bin_features(d.x, cfg.max_bins);
  switch (kind) {
    case RankerKind::kPointwiseBoost:
      return train_boosted_stumps(d, b, cfg);
    case RankerKind::kLambdaMartPairwise:
      return train_lambdamart(d, b, false, cfg, kind, report);
    case RankerKind::kLambdaMartListwise:
      return train_lambdamart(d, b, true, cfg, kind, report);
  }
  throw ConfigError("unknown ranker kind");
}

std::vector<std::pair<std::string, double>> feature_importance(const RankModel& model) {
  std::vector<double> acc(kNumFeatures, 0.0);
  double weight_sum = 0.0;
  for (const auto& tree : model.trees()) {
    std::vector<double> per(kNumFeatures, 0.0);
    double total = 0.0;
    for (const auto& n : tree.nodes) {
      if (n.feature < 0) continue;
      per[static_cast<std::size_t>(n.feature)] += n.gain;
      total += n.gain;
    }
    if (!(total > 0.0)) continue;
    const double w = model.kind() == RankerKind::kPointwiseBoost ? std::abs(tree.weight) : 1.0;
    if (!(w > 0.0)) continue;
    for (int f = 0; f < kNumFeatures; ++f) acc[static_cast<std::size_t>(f)] += w * per[static_cast<std::size_t>(f)] / total;
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw ConfigError("model has no splits to attribute");
  double sum = 0.0;
  for (double& a : acc) sum += a;
  std::vector<std::pair<std::string, double>> out;
  for (int f = 0; f < kNumFeatures; ++f) {
    out.emplace_back(std::string(feature_names()[static_cast<std::size_t>(f)]),
                     acc[static_cast<std::size_t>(f)] / sum);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::vector<std::string> RankedList::surfaces() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.surface);
  return out;
}

void sort_ranked(std::vector<RankedEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.surface < b.surface;
  });
}

RankedList rank_rows(const RankModel& model, const std::vector<RankRow>& rows,
                     std::size_t n) {
  RankedList out;
  out.entries.reserve(rows.size());
  for (const auto& r : rows) out.entries.push_back({r.surface, model.score(r.features)});
  sort_ranked(out.entries);
  if (n > 0 && out.entries.size() > n) out.entries.resize(n);
  return out;
}

double mean_group_ndcg(const std::vector<RankGroup>& groups,
                       const std::vector<std::vector<double>>& scores, int k) {
  const FlatData d = flatten(groups);
  std::vector<double> flat;
  for (const auto& s : scores) flat.insert(flat.end(), s.begin(), s.end());
  if (flat.size() != d.x.size()) throw ConfigError("scores do not match rows");
  return flat_mean_ndcg(d, flat, k);
}

}  // namespace dkit
