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


#include "dkit/metrics.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dkit/embeddings.h"
#include "dkit/error.h"
#include "dkit/text.h"

namespace dkit {
namespace {

using nlohmann::json;

std::set<std::string> fold_set(const GoldSet& gold) {
  std::set<std::string> out;
  for (const auto& g : gold) out.insert(casefold(g));
  return out;
}

void require_k(std::size_t k) {
  if (k < 1) throw ConfigError("k must be >= 1");
}

}  // namespace

std::size_t hits_at_k(const std::vector<std::string>& ranked, const GoldSet& gold,
                      std::size_t k) {
  const auto g = fold_set(gold);
  std::set<std::string> matched;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    const std::string f = casefold(ranked[i]);
    if (g.count(f)) matched.insert(f);
  }
  return matched.size();
}

double precision_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k) {
  require_k(k);
  return static_cast<double>(hits_at_k(ranked.surfaces(), gold, k)) / static_cast<double>(k);
}

double recall_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k) {
  require_k(k);
  const std::size_t g = fold_set(gold).size();
  if (g == 0) return 0.0;
  return static_cast<double>(hits_at_k(ranked.surfaces(), gold, k)) / static_cast<double>(g);
}

double f1_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k) {
  const double p = precision_at_k(ranked, gold, k);
  const double r = recall_at_k(ranked, gold, k);
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double mrr(const RankedList& ranked, const GoldSet& gold) {
  const auto g = fold_set(gold);
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    if (g.count(casefold(ranked.entries[i].surface))) {
      return 1.0 / static_cast<double>(i + 1);
    }
  }
  return 0.0;
}

double ndcg_at_k(const RankedList& ranked, const GoldSet& gold, std::size_t k) {
  require_k(k);
  const auto g = fold_set(gold);
  if (g.empty()) return 0.0;
  std::set<std::string> matched;
  double dcg = 0.0;
  for (std::size_t i = 0; i < ranked.entries.size() && i < k; ++i) {
    const std::string f = casefold(ranked.entries[i].surface);
    if (g.count(f) && matched.insert(f).second) {
      dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
  }
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, g.size()); ++i) {
    idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg / idcg;
}

double semantic_similarity_at_k(const RankedList& ranked, const GoldSet& gold,
                                const Embeddings& embeddings, std::size_t k) {
  require_k(k);
  const std::size_t top = std::min(k, ranked.entries.size());
  if (top == 0 || gold.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& g : gold) {
    const Eigen::VectorXd vg = embeddings.text_vector(g);
    for (std::size_t i = 0; i < top; ++i) {
      sum += cosine(embeddings.text_vector(ranked.entries[i].surface), vg);
    }
  }
  return sum / static_cast<double>(top * gold.size());
}

MetricTable item_metrics(const RankedList& ranked, const GoldSet& gold,
                         const EvalConfig& cfg, const Embeddings* embeddings) {
  MetricTable out;
  for (std::size_t k : cfg.ks) {
    const std::string s = std::to_string(k);
    out.emplace_back("P@" + s, precision_at_k(ranked, gold, k));
    out.emplace_back("R@" + s, recall_at_k(ranked, gold, k));
    out.emplace_back("F1@" + s, f1_at_k(ranked, gold, k));
  }
  out.emplace_back("MRR", mrr(ranked, gold));
  out.emplace_back("NDCG@" + std::to_string(cfg.ndcg_k), ndcg_at_k(ranked, gold, cfg.ndcg_k));
  if (embeddings) {
    out.emplace_back("SemSim@" + std::to_string(cfg.semsim_k),
                     semantic_similarity_at_k(ranked, gold, *embeddings, cfg.semsim_k));
  }
  return out;
}

EvalReport evaluate(const Run& run, const Dataset& dataset, const EvalConfig& cfg,
                    const Embeddings* embeddings) {
  EvalReport report;
  const RankedList empty;
  // Names come from an empty evaluation so that zero-item reports have them.
  MetricTable zero = item_metrics(empty, {"x"}, cfg, embeddings);
  for (auto& [name, v] : zero) v = 0.0;
  report.metrics = zero;
  std::map<Domain, std::vector<double>> domain_sums;
  for (const auto& item : dataset.items) {
    const auto it = run.find(item.id);
    MetricTable values = zero;
    if (it == run.end()) {
      ++report.missing;
    } else {
      values = item_metrics(it->second, item.distractors, cfg, embeddings);
    }
    ++report.items;
    auto& dom = report.per_domain[item.domain];
    if (dom.items++ == 0) dom.metrics = zero;
    for (std::size_t i = 0; i < values.size(); ++i) {
      report.metrics[i].second += values[i].second;
      dom.metrics[i].second += values[i].second;
    }
  }
  if (report.items > 0) {
    for (auto& [name, v] : report.metrics) v /= static_cast<double>(report.items);
  }
  for (auto& [d, dom] : report.per_domain) {
    for (auto& [name, v] : dom.metrics) v /= static_cast<double>(dom.items);
  }
  return report;
}

double EvalReport::metric(const std::string& name) const {
  for (const auto& [n, v] : metrics) {
    if (n == name) return v;
  }
  throw UnknownEntryError("metric", name);
}

nlohmann::json EvalReport::to_json() const {
  json j;
  j["items"] = items;
  j["missing"] = missing;
  json m = json::object();
  for (const auto& [n, v] : metrics) m[n] = v;
  j["metrics"] = m;
  json dom = json::object();
  for (const auto& [d, de] : per_domain) {
    json dm = json::object();
    for (const auto& [n, v] : de.metrics) dm[n] = v;
    dom[std::string(domain_name(d))] = {{"items", de.items}, {"metrics", dm}};
  }
  j["per_domain"] = dom;
  return j;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "items: " << items;
  if (missing) out << " (missing from run: " << missing << ")";
  out << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-10s %10s", "metric", "all");
  out << buf;
  for (const auto& [d, de] : per_domain) {
    std::snprintf(buf, sizeof(buf), " %12s", std::string(domain_name(d)).c_str());
    out << buf;
  }
  out << "\n";
  std::snprintf(buf, sizeof(buf), "%-10s %10zu", "n", items);
  out << buf;
  for (const auto& [d, de] : per_domain) {
    std::snprintf(buf, sizeof(buf), " %12zu", de.items);
    out << buf;
  }
  out << "\n";
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%-10s %10.4f", metrics[i].first.c_str(),
                  metrics[i].second);
    out << buf;
    for (const auto& [d, de] : per_domain) {
      std::snprintf(buf, sizeof(buf), " %12.4f", de.metrics[i].second);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

void write_run(const Run& run, std::ostream& out) {
  for (const auto& [id, list] : run) {
    json ranked = json::array();
    for (const auto& e : list.entries) ranked.push_back({{"surface", e.surface}, {"score", e.score}});
    json j;
    j["item_id"] = id;
    j["ranked"] = ranked;
    out << j.dump() << '\n';
  }
}

void save_run(const Run& run, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  write_run(run, out);
}

Run read_run(std::istream& in, const std::string& source) {
  Run run;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    try {
      const json j = json::parse(line);
      const json& id = j.at("item_id");
      RankedList list;
      for (const auto& e : j.at("ranked")) {
        list.entries.push_back({e.at("surface").get<std::string>(), e.value("score", 0.0)});
      }
      if (!run.emplace(id.is_string() ? id.get<std::string>() : id.dump(), std::move(list))
               .second) {
        throw ParseError(where + ": duplicate item_id");
      }
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return run;
}

Run load_run(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open run file: " + path);
  return read_run(in, path);
}

}  // namespace dkit
