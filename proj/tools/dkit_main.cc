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


// dkit command-line interface.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dkit/baselines.h"
#include "dkit/config.h"
#include "dkit/corpus.h"
#include "dkit/error.h"
#include "dkit/metrics.h"
#include "dkit/ranker.h"
#include "dkit/selector.h"
#include "dkit/server.h"
#include "dkit/text.h"
#include "dkit/toolkit.h"
#include "dkit/topics.h"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace dkit;

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  ResourcePaths paths;
  CLI::Option* seed_opt = nullptr;
  std::map<std::string, CLI::Option*> path_opts;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write " + path);
  out << text;
}

Dataset load_valid_dataset(const std::string& path) {
  LoadResult r = load_dataset(path);
  for (const auto& e : r.errors) {
    std::cerr << "warning: " << path << ":" << e.line << ": " << e.message << '\n';
  }
  return std::move(r.dataset);
}

class Cli {
 public:
  Cli() : app_("Distractor generation toolkit for cloze-style multiple-choice questions") {
    app_.require_subcommand(1);
    app_.fallthrough();
    app_.add_option("--config", g_.config, "Toolkit config file (JSON)");
    g_.seed_opt = app_.add_option("--seed", g_.seed, "Seed for every random choice");
    auto path = [&](const std::string& flag, const std::string& key, std::string& target,
                    const std::string& help) {
      g_.path_opts[key] = app_.add_option(flag, target, help);
    };
    auto& p = g_.paths;
    path("--taxonomy", "taxonomy", p.taxonomy, "Taxonomy file");
    path("--taxonomy-format", "taxonomy_format", p.taxonomy_format,
         "count_tsv or hypernym_export");
    path("--topic-model", "topic_model", p.topic_model, "Topic model file");
    path("--embeddings", "embeddings", p.embeddings, "Word embeddings (text format)");
    path("--frequencies", "frequencies", p.frequencies, "Unigram frequency table");
    path("--lexicon", "lexicon", p.lexicon, "POS lexicon (token<TAB>tag)");
    path("--model", "model", p.model, "Ranking model file");
    path("--contextual-cache", "contextual_cache", p.contextual_cache,
         "Contextual embedding cache (JSON lines)");
    path("--lm-corpus", "lm_corpus", p.lm_corpus, "Language-model corpus, one sentence per line");
    path("--search-fixture", "search_fixture", p.search_fixture, "Canned web-search responses");

    add_generate();
    add_csg();
    add_train();
    add_rank();
    add_eval();
    add_lda_train();
    add_serve();
    add_stats();
    add_split();
  }

  int run(int argc, char** argv) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app_.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app_.exit(e);
    } catch (const CLI::ParseError& e) {
      print_error("usage", e.what());
      return 2;
    }
    try {
      action_();
      return 0;
    } catch (const Error& e) {
      print_error(e.code(), e.what());
    } catch (const std::exception& e) {
      print_error("internal", e.what());
    }
    return 1;
  }

 private:
  static void print_error(const std::string& code, const std::string& message) {
    std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << std::endl;
  }

  // Config file first, then explicitly given flags.
  ToolkitConfig config() const {
    ToolkitConfig cfg = g_.config.empty() ? ToolkitConfig{} : load_config(g_.config);
    auto& p = cfg.resources;
    const std::map<std::string, std::pair<std::string*, const std::string*>> fields = {
        {"taxonomy", {&p.taxonomy, &g_.paths.taxonomy}},
        {"taxonomy_format", {&p.taxonomy_format, &g_.paths.taxonomy_format}},
        {"topic_model", {&p.topic_model, &g_.paths.topic_model}},
        {"embeddings", {&p.embeddings, &g_.paths.embeddings}},
        {"frequencies", {&p.frequencies, &g_.paths.frequencies}},
        {"lexicon", {&p.lexicon, &g_.paths.lexicon}},
        {"model", {&p.model, &g_.paths.model}},
        {"contextual_cache", {&p.contextual_cache, &g_.paths.contextual_cache}},
        {"lm_corpus", {&p.lm_corpus, &g_.paths.lm_corpus}},
        {"search_fixture", {&p.search_fixture, &g_.paths.search_fixture}},
    };
    for (const auto& [key, ptrs] : fields) {
      if (g_.path_opts.at(key)->count() > 0) *ptrs.first = *ptrs.second;
    }
    if (g_.seed_opt->count() > 0) cfg.apply_seed(g_.seed);
    return cfg;
  }

  void add_generate() {
    auto* c = app_.add_subcommand("generate", "Rank distractors for one stem and key");
    auto o = std::make_shared<GenerationRequest>();
    auto timing = std::make_shared<bool>(false);
    c->add_option("--stem", o->stem, "Stem with one ____ blank")->required();
    c->add_option("--key", o->key, "Correct answer")->required();
    c->add_option("-n", o->n, "Number of distractors")->default_val(3);
    c->add_flag("--use-web-score", o->use_web_score, "Enable the web-search feature");
    c->add_option("--model-id", o->model_id, "Expected model id");
    c->add_flag("--timing", *timing, "Include timing_ms in the output");
    c->callback([this, o, timing] {
      action_ = [this, o, timing] {
        const ToolkitConfig cfg = config();
        const auto tk = Toolkit::load(cfg, service_needs());
        const GenerationResponse r = generate(*tk, parse_generation_request(request_to_json(*o)));
        std::cout << (*timing ? r.to_json() : r.body()).dump() << '\n';
      };
    });
  }

  void add_csg() {
    auto* c = app_.add_subcommand(
        "csg", "Candidate set generation for one stem, or training groups for a dataset");
    struct Opts {
      std::string stem, key, dataset, out;
      std::size_t m = 0;
      std::size_t pool_size = 0;
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--stem", o->stem, "Stem with one ____ blank");
    c->add_option("--key", o->key, "Correct answer");
    c->add_option("-m", o->m, "Candidate count (default from config)");
    c->add_option("--dataset", o->dataset, "Build training groups for this dataset");
    c->add_option("--pool-size", o->pool_size, "Negatives per training item (default 100)");
    c->add_option("--out", o->out, "Output file (default stdout)");
    c->callback([this, o] {
      action_ = [this, o] {
        ToolkitConfig cfg = config();
        if (o->m > 0) cfg.csg.m = o->m;
        if (o->pool_size > 0) cfg.selector.pool_size = o->pool_size;
        ResourceNeeds needs;
        needs.taxonomy = needs.topic_model = true;
        const auto tk = Toolkit::load(cfg, needs);
        if (!o->dataset.empty()) {
          const Dataset ds = load_valid_dataset(o->dataset);
          TrainingSetReport rep;
          const auto groups =
              build_training_groups(ds, tk->generator(), tk->features(false), cfg.selector, &rep);
          std::ostringstream out;
          write_groups(groups, out);
          write_text(o->out, out.str());
          std::cerr << json{{"items", rep.items},     {"groups", rep.groups},
                            {"skipped", rep.skipped}, {"positives", rep.positives},
                            {"negatives", rep.negatives}}
                           .dump()
                    << '\n';
          return;
        }
        if (o->stem.empty() || o->key.empty()) {
          throw ConfigError("csg needs --stem and --key, or --dataset");
        }
        GenerationRequest req;
        req.stem = o->stem;
        req.key = o->key;
        parse_generation_request(request_to_json(req));
        const CandidateGenerator& gen = tk->generator();
        json concepts = json::array();
        if (const auto post = gen.posterior_concepts(o->stem, o->key)) {
          for (const auto& w : *post) {
            concepts.push_back({{"concept", w.concept_label}, {"weight", w.weight}});
          }
        }
        const CandidateSet set = gen.generate(o->stem, o->key);
        json cands = json::array();
        for (const auto& cd : set.candidates) {
          cands.push_back({{"surface", cd.surface}, {"probability", cd.probability}});
        }
        const CandidatePool pool =
            build_pool(gen, tk->tagger(), cfg.selector, o->stem, o->key);
        const json out = {{"stem", o->stem},         {"key", o->key},
                          {"concepts", concepts},    {"candidates", cands},
                          {"fallback", set.fallback}, {"pool", pool.surfaces},
                          {"pool_fallback", pool.fallback}};
        write_text(o->out, out.dump() + "\n");
      };
    });
  }

  void add_train() {
    auto* c = app_.add_subcommand("train", "Train a ranking model from training groups");
    struct Opts {
      std::string groups, dataset, kind, out;
      int rounds = 0, max_leaves = 0, min_rows = 0;
      double learning_rate = 0.0;
      bool importance = false;
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--groups", o->groups, "Training-group file");
    c->add_option("--dataset", o->dataset, "Build groups from this dataset first");
    c->add_option("--kind", o->kind,
                  "pointwise_boost, lambdamart_pairwise or lambdamart_listwise");
    c->add_option("--rounds", o->rounds, "Boosting rounds");
    c->add_option("--learning-rate", o->learning_rate, "Shrinkage for LambdaMART");
    c->add_option("--max-leaves", o->max_leaves, "Leaves per tree");
    c->add_option("--min-rows-per-leaf", o->min_rows, "Minimum rows per leaf");
    c->add_option("--out", o->out, "Model output file")->required();
    c->add_flag("--importance", o->importance, "Print feature importance");
    c->callback([this, o] {
      action_ = [this, o] {
        ToolkitConfig cfg = config();
        RankerKind kind = cfg.ranker_kind;
        TrainConfig tc = cfg.ranker;
        if (!o->kind.empty()) {
          kind = parse_ranker_kind(o->kind);
          if (kind != cfg.ranker_kind) {
            tc = default_train_config(kind);
            tc.seed = cfg.ranker.seed;
          }
        }
        if (o->rounds != 0) tc.rounds = o->rounds;
        if (o->learning_rate != 0.0) tc.learning_rate = o->learning_rate;
        if (o->max_leaves != 0) tc.max_leaves = o->max_leaves;
        if (o->min_rows != 0) tc.min_rows_per_leaf = o->min_rows;
        std::vector<RankGroup> groups;
        if (!o->groups.empty()) {
          groups = load_groups(o->groups);
        } else if (!o->dataset.empty()) {
          ResourceNeeds needs;
          needs.taxonomy = needs.topic_model = true;
          const auto tk = Toolkit::load(cfg, needs);
          groups = build_training_groups(load_valid_dataset(o->dataset), tk->generator(),
                                         tk->features(false), cfg.selector);
        } else {
          throw ConfigError("train needs --groups or --dataset");
        }
        TrainReport rep;
        const RankModel model = train(groups, kind, tc, &rep);
        model.save(o->out);
        json summary = {{"model_id", model.model_id()},
                        {"kind", std::string(ranker_kind_name(kind))},
                        {"rows", rep.rows},
                        {"groups", rep.groups},
                        {"trees", model.trees().size()}};
        if (!rep.ndcg_by_round.empty()) {
          summary["train_ndcg_first_round"] = rep.ndcg_by_round.front();
          summary["train_ndcg_final_round"] = rep.ndcg_by_round.back();
        }
        if (o->importance) {
          json imp = json::array();
          for (const auto& [name, v] : feature_importance(model)) {
            imp.push_back({{"feature", name}, {"importance", v}});
          }
          summary["importance"] = imp;
        }
        std::cout << summary.dump() << '\n';
      };
    });
  }

  void add_rank() {
    auto* c = app_.add_subcommand(
        "rank", "Rank candidate pools with a model, CSG order or a baseline");
    struct Opts {
      std::string dataset, out, stem, key, pool_file, baseline;
      std::size_t n = 10;
      bool csg_only = false;
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--dataset", o->dataset, "Rank every item of this dataset");
    c->add_option("--out", o->out, "Run file output (default stdout)");
    c->add_option("--stem", o->stem, "Single stem");
    c->add_option("--key", o->key, "Single key");
    c->add_option("--pool", o->pool_file,
                  "Explicit pool: csg output object with a 'pool' array, or a JSON array");
    c->add_option("-n", o->n, "Entries per ranked list")->default_val(10);
    c->add_flag("--csg-only", o->csg_only, "Unranked CSG order (probability as score)");
    c->add_option("--baseline", o->baseline,
                  "ed, embsim, embsim_cf, revup or thesaurus_path");
    c->callback([this, o] {
      action_ = [this, o] {
        const ToolkitConfig cfg = config();
        ResourceNeeds needs;
        needs.taxonomy = needs.topic_model = true;
        const bool use_model = !o->csg_only && o->baseline.empty();
        needs.model = use_model;
        if (!o->baseline.empty()) {
          const BaselineKind kind = parse_baseline(o->baseline);
          needs.embeddings = kind == BaselineKind::kEmbSim || kind == BaselineKind::kEmbSimCf ||
                             kind == BaselineKind::kRevup;
          needs.lm = kind == BaselineKind::kEmbSimCf || kind == BaselineKind::kRevup;
        }
        const auto tk = Toolkit::load(cfg, needs);

        auto rank_one = [&](const std::string& stem, const std::string& key,
                            const std::optional<std::vector<std::string>>& pool) {
          if (o->csg_only) {
            const CandidateSet set = tk->generator().generate(stem, key, o->n);
            RankedList list;
            for (const auto& cd : set.candidates) list.entries.push_back({cd.surface, cd.probability});
            list.fallback = set.fallback;
            return list;
          }
          const std::vector<std::string> surfaces =
              pool ? *pool : build_pool(tk->generator(), tk->tagger(), cfg.selector, stem, key).surfaces;
          if (!o->baseline.empty()) {
            BaselineResources br;
            br.embeddings = tk->embeddings();
            br.lm = tk->language_model();
            br.taxonomy = tk->taxonomy();
            if (surfaces.empty()) return RankedList{{}, true};
            RankedList list = baseline_rank(parse_baseline(o->baseline), stem, key, surfaces, br);
            if (list.entries.size() > o->n) list.entries.resize(o->n);
            return list;
          }
          if (pool) return tk->selector().rank_pool(stem, key, *pool, o->n, tk->features(false));
          return tk->selector().rank(stem, key, o->n);
        };

        if (!o->dataset.empty()) {
          Run run;
          for (const auto& item : load_valid_dataset(o->dataset).items) {
            run[item.id] = rank_one(item.stem, item.key, std::nullopt);
          }
          std::ostringstream out;
          write_run(run, out);
          write_text(o->out, out.str());
          return;
        }
        if (o->stem.empty() || o->key.empty()) {
          throw ConfigError("rank needs --dataset, or --stem and --key");
        }
        std::optional<std::vector<std::string>> pool;
        bool pool_fallback = false;
        if (!o->pool_file.empty()) {
          std::ifstream in(o->pool_file);
          if (!in) throw ParseError("cannot open pool file: " + o->pool_file);
          json j;
          try {
            j = json::parse(in);
            pool = (j.is_object() ? j.at("pool") : j).get<std::vector<std::string>>();
            if (j.is_object()) pool_fallback = j.value("pool_fallback", false);
          } catch (const json::exception& e) {
            throw ParseError(o->pool_file + ": " + e.what());
          }
        }
        const RankedList list = rank_one(o->stem, o->key, pool);
        GenerationResponse r;
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
          r.distractors.push_back({list.entries[i].surface, list.entries[i].score, i + 1});
        }
        r.fallback_used = list.fallback || pool_fallback;
        if (use_model) r.model_id = tk->model()->model_id();
        std::cout << r.body().dump() << '\n';
      };
    });
  }

  void add_eval() {
    auto* c = app_.add_subcommand("eval", "Evaluate a run file against a dataset");
    struct Opts {
      std::string run, dataset, out;
      bool json_out = false;
      std::vector<std::size_t> ks{1, 3};
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--run", o->run, "Run file")->required();
    c->add_option("--dataset", o->dataset, "Dataset with gold distractors")->required();
    c->add_option("--k", o->ks, "Cutoffs for P/R/F1")->delimiter(',');
    c->add_flag("--json", o->json_out, "Machine-readable report");
    c->add_option("--out", o->out, "Report output (default stdout)");
    c->callback([this, o] {
      action_ = [this, o] {
        const ToolkitConfig cfg = config();
        const auto tk = Toolkit::load(cfg, ResourceNeeds{});
        EvalConfig ec;
        ec.ks = o->ks;
        const EvalReport rep =
            evaluate(load_run(o->run), load_valid_dataset(o->dataset), ec, tk->embeddings());
        write_text(o->out, o->json_out ? rep.to_json().dump(2) + "\n" : rep.to_text());
      };
    });
  }

  void add_lda_train() {
    auto* c = app_.add_subcommand("lda-train", "Train a topic model (collapsed Gibbs LDA)");
    struct Opts {
      std::string corpus, out;
      int topics = 0, iterations = 0;
      double alpha = 0.0, beta = 0.0;
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--corpus", o->corpus, "One document per line")->required();
    c->add_option("--topics", o->topics, "Number of topics (default 100)");
    c->add_option("--iterations", o->iterations, "Gibbs sweeps (default 200)");
    c->add_option("--alpha", o->alpha, "Document-topic prior (default 50/K)");
    c->add_option("--beta", o->beta, "Topic-word prior (default 0.01)");
    c->add_option("--out", o->out, "Topic model output file")->required();
    c->callback([this, o] {
      action_ = [this, o] {
        LdaConfig lc = config().lda;
        if (o->topics != 0) lc.topics = o->topics;
        if (o->iterations != 0) lc.iterations = o->iterations;
        if (o->alpha != 0.0) lc.alpha = o->alpha;
        if (o->beta != 0.0) lc.beta = o->beta;
        std::vector<TokenList> docs;
        for (const auto& line : read_lines(o->corpus)) {
          auto t = topic_tokens(line);
          if (!t.empty()) docs.push_back(std::move(t));
        }
        const TopicModel m = train_lda(docs, lc);
        m.save(o->out);
        std::cout << json{{"topics", m.num_topics()},
                          {"vocabulary", m.vocabulary_size()},
                          {"documents", docs.size()},
                          {"perplexity", perplexity(m, docs)}}
                         .dump()
                  << '\n';
      };
    });
  }

  void add_serve() {
    auto* c = app_.add_subcommand("serve", "Run the HTTP service");
    struct Opts {
      std::string host, feedback_log;
      int port = -1, threads = 0;
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--host", o->host, "Bind address");
    c->add_option("--port", o->port, "Port (0 picks a free one)");
    c->add_option("--threads", o->threads, "Worker threads");
    c->add_option("--feedback-log", o->feedback_log, "Feedback log file");
    c->callback([this, o] {
      action_ = [this, o] {
        ToolkitConfig cfg = config();
        if (!o->host.empty()) cfg.service.host = o->host;
        if (o->port >= 0) cfg.service.port = o->port;
        if (o->threads > 0) cfg.service.threads = o->threads;
        if (!o->feedback_log.empty()) cfg.service.feedback_log = o->feedback_log;
        run_service(cfg);
      };
    });
  }

  void add_stats() {
    auto* c = app_.add_subcommand("stats", "Dataset statistics");
    struct Opts {
      std::string dataset;
      bool json_out = false;
      bool key_pos = false;
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--dataset", o->dataset, "Dataset file")->required();
    c->add_flag("--json", o->json_out, "Machine-readable output");
    c->add_flag("--key-pos", o->key_pos, "Include the key POS distribution");
    c->callback([this, o] {
      action_ = [this, o] {
        const ToolkitConfig cfg = config();
        const auto tk = Toolkit::load(cfg, ResourceNeeds{});
        const StatsReport rep =
            dataset_stats(load_valid_dataset(o->dataset), o->key_pos ? &tk->tagger() : nullptr);
        std::cout << (o->json_out ? rep.to_json().dump(2) + "\n" : rep.to_text());
      };
    });
  }

  void add_split() {
    auto* c = app_.add_subcommand("split", "Seeded train/valid/test split of a dataset");
    struct Opts {
      std::string dataset, out_dir;
      double train = 0.8, valid = 0.1, test = 0.1;
    };
    auto o = std::make_shared<Opts>();
    c->add_option("--dataset", o->dataset, "Dataset file")->required();
    c->add_option("--out-dir", o->out_dir, "Directory for train/valid/test.jsonl")->required();
    c->add_option("--train", o->train, "Train ratio");
    c->add_option("--valid", o->valid, "Validation ratio");
    c->add_option("--test", o->test, "Test ratio");
    c->callback([this, o] {
      action_ = [this, o] {
        const ToolkitConfig cfg = config();
        const auto parts = split_dataset(load_valid_dataset(o->dataset),
                                         {o->train, o->valid, o->test}, cfg.seed);
        std::filesystem::create_directories(o->out_dir);
        const char* names[] = {"train.jsonl", "valid.jsonl", "test.jsonl"};
        json sizes;
        for (int i = 0; i < 3; ++i) {
          save_dataset(parts[static_cast<std::size_t>(i)],
                       (std::filesystem::path(o->out_dir) / names[i]).string());
          sizes[std::string(split_name(parts[static_cast<std::size_t>(i)].split))] =
              parts[static_cast<std::size_t>(i)].size();
        }
        std::cout << sizes.dump() << '\n';
      };
    });
  }

  CLI::App app_;
  Globals g_;
  std::function<void()> action_;
};

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  return cli.run(argc, argv);
}
