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


// Ranking metrics against a gold distractor set, dataset-level evaluation
// with a per-domain breakdown, and run files.
//
// Gold matching is case-folded exact string equality. Relevance is binary,
// so the NDCG gain 2^rel - 1 is 1 for a hit and 0 otherwise.

#ifndef DKIT_METRICS_H_
#define DKIT_METRICS_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dkit/corpus.h"
#include "dkit/ranker.h"
#include "json.hpp"

namespace dkit {

class Embeddings;

using GoldSet = std::vector<std::string>;

// Number of the top-k surfaces that are gold.
std::size_t hits_at_k(const std::vector<std::string>& ranked, const GoldSet& gold,
                      std::size_t k);

// k >= 1 (ConfigError otherwise). Empty gold gives 0 for recall.
double precision_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k);
double recall_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k);
double f1_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k);

double mrr(const RankedList& ranked, const GoldSet& gold);

// IDCG uses min(k, |gold|) ideal hits; empty gold gives 0.
double ndcg_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k = 10);

// Mean cosine over all (top-k, gold) pairs of averaged static embeddings.
// Out-of-vocabulary texts contribute 0.
double semantic_similarity_at_k(const RankedList& ranked, const GoldSet& gold,
                                const Embeddings& embeddings, std::size_t k = 3);

struct EvalConfig {
  std::vector<std::size_t> ks = {1, 3};  // P@k, R@k and F1@k for each
  std::size_t ndcg_k = 10;
  std::size_t semsim_k = 3;
};

// Metric name -> mean value, in report order.
using MetricTable = std::vector<std::pair<std::string, double>>;

struct DomainEval {
  std::size_t items = 0;
  MetricTable metrics;
};

struct EvalReport {
  std::size_t items = 0;
  std::size_t missing = 0;  // items absent from the run
  MetricTable metrics;
  std::map<Domain, DomainEval> per_domain;

  double metric(const std::string& name) const;  // throws UnknownEntryError
  nlohmann::json to_json() const;
  std::string to_text() const;
};

// Metric values of one item, in report order. SemSim is included only when
// embeddings are given.
MetricTable item_metrics(const RankedList& ranked, const GoldSet& gold,
                         const EvalConfig& cfg, const Embeddings* embeddings);

using Run = std::map<std::string, RankedList>;

// Unweighted mean over dataset items; items missing from the run score 0.
EvalReport evaluate(const Run& run, const Dataset& dataset, const EvalConfig& cfg = {},
                    const Embeddings* embeddings = nullptr);

// Run file: one {item_id, ranked: [{surface, score}]} object per line.
void write_run(const Run& run, std::ostream& out);
void save_run(const Run& run, const std::string& path);
Run read_run(std::istream& in, const std::string& source = "<stream>");
Run load_run(const std::string& path);

}  // namespace dkit

#endif  // DKIT_METRICS_H_
