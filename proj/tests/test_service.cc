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


#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "dkit/config.h"
#include "dkit/error.h"
#include "dkit/feedback.h"
#include "dkit/server.h"
#include "dkit/toolkit.h"

// After Eigen: <resolv.h> defines a _res macro that clashes with Eigen.
#include <httplib.h>

namespace dkit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dkit_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const Toolkit& toy() {
  static const std::unique_ptr<Toolkit> tk = [] {
    auto cfg = load_config(std::string(DKIT_TOY_DIR) + "/config.json");
    return Toolkit::load(cfg, service_needs());
  }();
  return *tk;
}

TEST(Config, ResolvesPathsAndRejectsUnknownKeys) {
  const auto cfg = load_config(std::string(DKIT_TOY_DIR) + "/config.json");
  EXPECT_EQ(fs::path(cfg.resources.taxonomy).filename(), "taxonomy.tsv");
  EXPECT_TRUE(fs::path(cfg.resources.taxonomy).is_absolute());
  EXPECT_EQ(cfg.lda.topics, 8);
  EXPECT_EQ(cfg.selector.pos_pool, 30u);
  EXPECT_THROW(config_from_json(json::parse(R"({"bogus": 1})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"csg": {"m": "x"}})")), ConfigError);
  const auto d = config_from_json(json::object());
  EXPECT_EQ(d.csg.concept_set_size, 20u);
  EXPECT_EQ(d.selector.csg_top, 30u);
  EXPECT_EQ(d.selector.pool_size, 100u);
  const auto round = config_from_json(config_to_json(cfg));
  EXPECT_EQ(config_to_json(round), config_to_json(cfg));
}

TEST(Toolkit, MissingResourceIsNamed) {
  ToolkitConfig cfg;
  ResourceNeeds needs;
  needs.taxonomy = true;
  try {
    Toolkit::load(cfg, needs);
    FAIL();
  } catch (const MissingResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("resources.taxonomy"), std::string::npos);
  }
}

TEST(Requests, FieldLevelValidation) {
  auto fields = [](const char* body) {
    try {
      parse_generation_request(json::parse(body));
    } catch (const ValidationError& e) {
      std::set<std::string> out;
      for (const auto& f : e.fields()) out.insert(f.field);
      return out;
    }
    return std::set<std::string>{};
  };
  EXPECT_TRUE(fields(R"({"stem":"a ____ b","key":"x"})").empty());
  EXPECT_EQ(fields(R"({"stem":"no blank","key":"x"})"), std::set<std::string>{"stem"});
  EXPECT_EQ(fields(R"({"stem":"a ____","key":"","n":0})"), (std::set<std::string>{"key", "n"}));
  EXPECT_EQ(fields(R"({"stem":"a ____","key":"x","options":{"use_web_score":"yes"}})"),
            std::set<std::string>{"options.use_web_score"});
  const auto r = parse_generation_request(json::parse(R"({"stem":"a ____","key":"x"})"));
  EXPECT_EQ(r.n, 3u);
}

TEST(Generate, MatchesSelectorAndIsDeterministic) {
  const auto& tk = toy();
  GenerationRequest req;
  req.stem = "____ carries the genetic information in a cell .";
  req.key = "dna";
  req.n = 3;
  const auto a = generate(tk, req);
  const auto b = generate(tk, req);
  EXPECT_EQ(a.body().dump(), b.body().dump());
  ASSERT_EQ(a.distractors.size(), 3u);
  EXPECT_FALSE(a.fallback_used);
  const auto direct = tk.selector().rank(req.stem, req.key, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.distractors[i].surface, direct.entries[i].surface);
    EXPECT_EQ(a.distractors[i].score, direct.entries[i].score);
    EXPECT_EQ(a.distractors[i].rank, i + 1);
    if (i) { EXPECT_GE(a.distractors[i - 1].score, a.distractors[i].score); }
  }
  EXPECT_FALSE(a.body().contains("timing_ms"));
  EXPECT_TRUE(a.to_json().contains("timing_ms"));

  req.key = "zyzzyva";
  const auto fb = generate(tk, req);
  EXPECT_TRUE(fb.fallback_used);
  EXPECT_LE(fb.distractors.size(), 3u);

  req.key = "dna";
  req.model_id = "nope";
  EXPECT_THROW(generate(tk, req), UnknownEntryError);
}

FeedbackRecord fb(const std::string& stem, const std::string& key, const std::string& cand,
                  Verdict v, const std::string& repl = "", const std::string& session = "s1") {
  FeedbackRecord r;
  r.request.stem = stem;
  r.request.key = key;
  r.candidate = cand;
  r.verdict = v;
  r.replacement = repl;
  r.session_id = session;
  return r;
}

TEST(Feedback, AppendOnlyStoreAndCompaction) {
  const auto dir = scratch("store");
  const std::string path = (dir / "fb.jsonl").string();
  {
    FeedbackStore s(path, 2);
    EXPECT_EQ(s.append(fb("a ____", "x", "y", Verdict::kAccepted)), "fb-000001");
    EXPECT_EQ(s.append(fb("a ____", "x", "z", Verdict::kRejected)), "fb-000002");
    EXPECT_EQ(s.append(fb("a ____", "x", "w", Verdict::kEdited, "v")), "fb-000003");
    EXPECT_THROW(s.append(fb("a ____", "x", "w", Verdict::kEdited)), ValidationError);
    EXPECT_EQ(s.size(), 3u);
  }
  {
    std::ofstream(path, std::ios::app) << "garbage line\n";
  }
  FeedbackStore again(path);
  EXPECT_EQ(again.size(), 3u);
  EXPECT_EQ(again.skipped_lines(), 1u);
  EXPECT_EQ(again.append(fb("a ____", "x", "q", Verdict::kAccepted)), "fb-000004");
  again.compact();
  FeedbackStore third(path);
  EXPECT_EQ(third.size(), 4u);
  EXPECT_EQ(third.skipped_lines(), 0u);
  EXPECT_EQ(third.records()[2].replacement, "v");
}

TEST(Feedback, ExportFormat) {
  std::vector<FeedbackRecord> recs = {
      fb("The ____ barks.", "Dog", "cat", Verdict::kAccepted),
      fb("The ____ barks.", "dog", "cow", Verdict::kAccepted),
      fb("The ____ barks.", "dog", "rock", Verdict::kRejected),
      fb("Ice is ____ .", "cold", "warm", Verdict::kEdited, "hot", "s2"),
  };
  const auto groups = export_feedback(recs, {}, {});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].item_id, feedback_item_id("The ____ barks.", "dog"));
  std::map<std::string, int> rel;
  for (const auto& r : groups[0].rows) rel[r.surface] = r.relevance;
  EXPECT_EQ(rel, (std::map<std::string, int>{{"cat", 1}, {"cow", 1}, {"rock", 0}}));
  rel.clear();
  for (const auto& r : groups[1].rows) rel[r.surface] = r.relevance;
  EXPECT_EQ(rel, (std::map<std::string, int>{{"hot", 1}, {"warm", 0}}));

  FeedbackFilter only_rejected;
  only_rejected.verdict = Verdict::kRejected;
  const auto rej = export_feedback(recs, only_rejected, {});
  ASSERT_EQ(rej.size(), 1u);
  ASSERT_EQ(rej[0].rows.size(), 1u);
  EXPECT_EQ(rej[0].rows[0].relevance, 0);
  FeedbackFilter s2;
  s2.session_id = "s2";
  EXPECT_EQ(export_feedback(recs, s2, {}).size(), 1u);

  recs.push_back(fb("The ____ barks.", "dog", "cat", Verdict::kRejected));
  for (const auto& r : export_feedback(recs, {}, {})[0].rows) {
    if (r.surface == "cat") { EXPECT_EQ(r.relevance, 0); }
  }
}

TEST(Service, Routes) {
  const auto dir = scratch("routes");
  FeedbackStore store((dir / "fb.jsonl").string());
  const DistractorService svc(toy(), store);

  auto health = svc.handle("GET", "/v1/health", "");
  EXPECT_EQ(health.status, 200);
  const auto h = json::parse(health.body);
  EXPECT_EQ(h["status"], "ok");
  EXPECT_EQ(h["model_id"], toy().model()->model_id());
  EXPECT_EQ(h["schema_version"], 1);

  EXPECT_EQ(json::parse(svc.handle("GET", "/v1/models", "").body)["models"].size(), 1u);

  auto gen = svc.handle("POST", "/v1/distractors",
                        R"({"stem":"____ carries the genetic information in a cell .","key":"dna","n":3})");
  EXPECT_EQ(gen.status, 200);
  EXPECT_EQ(json::parse(gen.body)["distractors"].size(), 3u);

  auto bad = svc.handle("POST", "/v1/distractors", R"({"stem":"x","key":"y"})");
  EXPECT_EQ(bad.status, 400);
  const auto err = json::parse(bad.body)["error"];
  EXPECT_EQ(err["code"], "invalid_request");
  EXPECT_EQ(svc.handle("POST", "/v1/distractors", "{oops").status, 400);
  EXPECT_EQ(svc.handle("POST", "/v1/distractors",
                       R"({"stem":"a ____","key":"dna","options":{"model_id":"zz"}})").status,
            404);

  const std::string accept =
      R"({"request":{"stem":"a ____ b","key":"dna"},"candidate":"rna","verdict":"accepted"})";
  auto posted = svc.handle("POST", "/v1/feedback", accept);
  EXPECT_EQ(posted.status, 201);
  EXPECT_EQ(json::parse(posted.body)["id"], "fb-000001");
  EXPECT_EQ(svc.handle("POST", "/v1/feedback",
                       R"({"request":{"stem":"a ____ b","key":"dna"},"candidate":"x","verdict":"edited"})")
                .status,
            400);
  svc.handle("POST", "/v1/feedback",
             R"({"request":{"stem":"a ____ b","key":"dna"},"candidate":"atp","verdict":"rejected"})");
  auto exp = svc.handle("GET", "/v1/feedback/export", "");
  EXPECT_EQ(exp.status, 200);
  EXPECT_EQ(exp.content_type, "application/x-ndjson");
  std::istringstream lines(exp.body);
  const auto groups = read_groups(lines);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].rows.size(), 2u);
  EXPECT_EQ(svc.handle("GET", "/v1/feedback/export", "", {{"verdict", "maybe"}}).status, 400);
  EXPECT_EQ(svc.handle("GET", "/v1/nothing", "").status, 404);
  EXPECT_EQ(svc.handle("DELETE", "/v1/health", "").status, 405);
}

TEST(Service, ServesOverSocket) {
  const auto dir = scratch("socket");
  FeedbackStore store((dir / "fb.jsonl").string());
  DistractorService svc(toy(), store);
  const int port = svc.bind("127.0.0.1", 0, 2);
  ASSERT_GT(port, 0);
  std::thread t([&] { svc.run(); });
  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Get("/v1/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["status"], "ok");
  res = cli.Post("/v1/distractors", R"({"stem":"a ____","key":"dna","n":2})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(json::parse(res->body)["distractors"].size(), 2u);

  DistractorService other(toy(), store);
  EXPECT_THROW(other.bind("127.0.0.1", port, 1), Error);
  svc.stop();
  t.join();
}

// ---- command line ------------------------------------------------------------

struct Proc {
  int code;
  std::string out;
  std::string err;
};

Proc run_cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = std::string(DKIT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" +
                          err.string();
  const int status = std::system(cmd.c_str());
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

TEST(Cli, ErrorsAreOneLineJson) {
  const auto dir = scratch("cli_err");
  auto p = run_cli("eval --run /nonexistent/run.jsonl --dataset /nonexistent/d.jsonl", dir);
  EXPECT_EQ(p.code, 1);
  ASSERT_FALSE(p.err.empty());
  EXPECT_EQ(std::count(p.err.begin(), p.err.end(), '\n'), 1);
  const auto j = json::parse(p.err);
  EXPECT_TRUE(j["error"].contains("code"));
  EXPECT_TRUE(j["error"].contains("message"));
  EXPECT_EQ(run_cli("no-such-command", dir).code, 2);
}

TEST(Cli, SingleClassTrainingFailsNamingTheClass) {
  const auto dir = scratch("cli_single");
  std::ofstream groups(dir / "g.jsonl");
  std::vector<double> f(33, 0.5);
  for (int i = 0; i < 4; ++i) {
    groups << json{{"item_id", "a"}, {"surface", "s" + std::to_string(i)}, {"relevance", 0},
                   {"features", f}}
                  .dump()
           << "\n";
  }
  groups.close();
  auto p = run_cli("train --groups " + (dir / "g.jsonl").string() + " --out " +
                       (dir / "m.json").string(),
                   dir);
  EXPECT_EQ(p.code, 1);
  const auto j = json::parse(p.err);
  EXPECT_EQ(j["error"]["code"], "single_class");
  EXPECT_NE(j["error"]["message"].get<std::string>().find("positive"), std::string::npos);
}

TEST(Cli, PerfectRunEvaluatesToOne) {
  const auto dir = scratch("cli_eval");
  std::ofstream ds(dir / "d.jsonl");
  ds << R"({"id":"a","domain":"science","stem":"x ____","key":"k","distractors":["p","q"]})" << "\n";
  ds.close();
  std::ofstream run(dir / "r.jsonl");
  run << R"({"item_id":"a","ranked":[{"surface":"p","score":2},{"surface":"q","score":1}]})" << "\n";
  run.close();
  auto p = run_cli("eval --json --k 2 --run " + (dir / "r.jsonl").string() + " --dataset " +
                       (dir / "d.jsonl").string(),
                   dir);
  ASSERT_EQ(p.code, 0) << p.err;
  const auto j = json::parse(p.out);
  for (const auto& [name, v] : j["metrics"].items()) EXPECT_DOUBLE_EQ(v.get<double>(), 1.0) << name;
}

TEST(Cli, GenerateEqualsCsgThenRank) {
  const auto dir = scratch("cli_pipe");
  const std::string cfg = std::string("--config ") + DKIT_TOY_DIR + "/config.json ";
  const std::string stem = "\"The ____ is the organelle where energy is produced in cells .\"";
  auto gen = run_cli(cfg + "generate --stem " + stem + " --key mitochondrion -n 5", dir);
  ASSERT_EQ(gen.code, 0) << gen.err;
  auto csg = run_cli(cfg + "csg --stem " + stem + " --key mitochondrion", dir);
  ASSERT_EQ(csg.code, 0) << csg.err;
  std::ofstream(dir / "pool.json") << csg.out;
  auto rank = run_cli(cfg + "rank --stem " + stem + " --key mitochondrion -n 5 --pool " +
                          (dir / "pool.json").string(),
                      dir);
  ASSERT_EQ(rank.code, 0) << rank.err;
  const auto g = json::parse(gen.out)["distractors"];
  const auto r = json::parse(rank.out)["distractors"];
  ASSERT_EQ(g.size(), r.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(g[i]["surface"], r[i]["surface"]);
    EXPECT_EQ(g[i]["score"], r[i]["score"]);
  }
}

}  // namespace
}  // namespace dkit
