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

// Learning-to-rank over feature vectors with binary relevance.
//
//   pointwise_boost      discrete AdaBoost on depth-1 stumps (exp. loss)
//   lambdamart_pairwise  gradient-boosted trees on logistic pair lambdas
//   lambdamart_listwise  same, each pair's lambda scaled by |ΔNDCG@10|
//
// Trees are grown leaf-wise on pre-binned features. Everything is
// deterministic; the seed is recorded in the model for provenance.

#ifndef DKIT_RANKER_H_
#define DKIT_RANKER_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dkit/features.h"
#include "json.hpp"

namespace dkit {

struct RankRow {
  std::string surface;
  FeatureVector features = FeatureVector::Zero();
  int relevance = 0;  // 0 or 1
};

struct RankGroup {
  std::string item_id;
  std::vector<RankRow> rows;
};

// Training-group file: one JSON object per row,
// {item_id, surface, relevance, features[33]}. Rows of one group need not be
// contiguous; groups keep first-appearance order.
void write_groups(const std::vector<RankGroup>& groups, std::ostream& out);
void save_groups(const std::vector<RankGroup>& groups, const std::string& path);
std::vector<RankGroup> read_groups(std::istream& in,
                                   const std::string& source = "<stream>");
std::vector<RankGroup> load_groups(const std::string& path);

enum class RankerKind { kPointwiseBoost, kLambdaMartPairwise, kLambdaMartListwise };

std::string_view ranker_kind_name(RankerKind kind);
RankerKind parse_ranker_kind(std::string_view name);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output
  double gain = 0.0;   // impurity decrease weighted by reach probability
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double weight = 1.0;

  double predict(const FeatureVector& x) const;
  bool has_split() const;
};

struct TrainConfig {
  int rounds = 200;
  double learning_rate = 0.1;
  int max_leaves = 8;
  int min_rows_per_leaf = 5;
  std::uint64_t seed = 1;
  int ndcg_truncation = 10;
  int max_bins = 256;
};

// Declared starting points: 100 stumps for boosting, 200 trees otherwise.
TrainConfig default_train_config(RankerKind kind);

inline constexpr int kRankModelFormatVersion = 1;

class RankModel {
 public:
  RankModel() = default;
  RankModel(RankerKind kind, std::vector<RegressionTree> trees, TrainConfig cfg,
            int schema_version = kFeatureSchemaVersion);

  RankerKind kind() const { return kind_; }
  int schema_version() const { return schema_version_; }
  const TrainConfig& config() const { return config_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }
  bool empty() const { return trees_.empty(); }

  double score(const FeatureVector& x) const;

  // Short stable identifier derived from the serialized model.
  std::string model_id() const;

  nlohmann::json to_json() const;
  static RankModel from_json(const nlohmann::json& j);
  std::string serialize() const;
  void save(const std::string& path) const;
  static RankModel load(const std::string& path);

 private:
  RankerKind kind_ = RankerKind::kLambdaMartListwise;
  std::vector<RegressionTree> trees_;
  TrainConfig config_;
  int schema_version_ = kFeatureSchemaVersion;
};

struct TrainReport {
  // Mean training NDCG@truncation after each round (LambdaMART kinds).
  std::vector<double> ndcg_by_round;
  std::size_t rows = 0;
  std::size_t groups = 0;
};

// Throws ConfigError for invalid configs and Error("single_class") when the
// rows lack positives or negatives.
RankModel train(const std::vector<RankGroup>& groups, RankerKind kind,
                const TrainConfig& cfg, TrainReport* report = nullptr);

// Normalized mean impurity decrease per feature, descending (ties by slot
// order). Throws ConfigError for a model without any split.
std::vector<std::pair<std::string, double>> feature_importance(const RankModel& model);

struct RankedEntry {
  std::string surface;
  double score = 0.0;
};

struct RankedList {
  std::vector<RankedEntry> entries;  // descending score, ties by surface
  bool fallback = false;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::vector<std::string> surfaces() const;
};

// Sorts descending by score with lexicographic tie-break.
void sort_ranked(std::vector<RankedEntry>& entries);

// Scores and sorts (surface, features) rows, truncated to n (0 = all).
RankedList rank_rows(const RankModel& model, const std::vector<RankRow>& rows,
                     std::size_t n = 0);

// Mean NDCG@k over groups with at least one positive, scoring rows with
// `scores` (parallel to the flattened rows).
double mean_group_ndcg(const std::vector<RankGroup>& groups,
                       const std::vector<std::vector<double>>& scores, int k);

}  // namespace dkit

#endif  // DKIT_RANKER_H_
