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

#include <cmath>
#include <sstream>

#include "dkit/embeddings.h"
#include "dkit/error.h"
#include "dkit/features.h"
#include "dkit/openie.h"
#include "dkit/pos_tagger.h"
#include "dkit/search.h"
#include "dkit/text.h"
#include "support/oracles.h"
#include "support/synthetic.h"

namespace dkit {
namespace {

using testing::random_text;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

TEST(Strings, HandExamples) {
  EXPECT_EQ(edit_distance("DNA", "RNA"), 1);
  EXPECT_EQ(longest_common_suffix_length("DNA", "RNA"), 2);
  EXPECT_EQ(edit_distance("kitten", "sitting"), 3);
  EXPECT_EQ(edit_distance("", "abc"), 3);
  EXPECT_EQ(longest_common_prefix_length("protein", "Proteins"), 7);
  EXPECT_EQ(longest_common_subsequence_length("cat", "dog"), 0);
  EXPECT_EQ(edit_distance("中文", "中"), 1);
  for (const char* s : {"", "a", "ribosome", "naïve"}) {
    const int n = static_cast<int>(to_code_points(s).size());
    EXPECT_EQ(edit_distance(s, s), 0);
    EXPECT_EQ(longest_common_prefix_length(s, s), n);
    EXPECT_EQ(longest_common_suffix_length(s, s), n);
    EXPECT_EQ(longest_common_subsequence_length(s, s), n);
  }
}

TEST(Strings, MatchDynamicProgrammingOracles) {
  Rng rng(404);
  for (int i = 0; i < 2000; ++i) {
    const std::string a = random_text(rng, 8), b = random_text(rng, 8);
    ASSERT_EQ(edit_distance(a, b), testing::oracle_edit_distance(a, b)) << a << " | " << b;
    ASSERT_EQ(longest_common_subsequence_length(a, b), testing::oracle_lcs_subsequence(a, b));
    ASSERT_EQ(longest_common_prefix_length(a, b), testing::oracle_common_prefix(a, b));
    ASSERT_EQ(longest_common_suffix_length(a, b), testing::oracle_common_suffix(a, b));
  }
}

TEST(PosJaccard, SetArithmetic) {
  LexiconTagger t;
  t.add("alpha", "NN");
  t.add("beta", "NN");
  t.add("gamma", "VB");
  t.add("deltas", "NNS");
  EXPECT_DOUBLE_EQ(pos_jaccard("alpha", "beta", t), 1.0);
  EXPECT_DOUBLE_EQ(pos_jaccard("alpha", "gamma", t), 0.0);
  EXPECT_DOUBLE_EQ(pos_jaccard("alpha", "beta deltas", t), 0.5);
  EXPECT_DOUBLE_EQ(pos_jaccard("", "", t), 0.0);
}

TEST(OpenIe, ReverbPatterns) {
  const auto& tagger = default_pos_tagger();
  EXPECT_EQ(extract_triplet_texts("cells contain DNA", tagger),
            (std::vector<std::string>{"cells contain DNA"}));
  EXPECT_TRUE(extract_triplet_texts("the dog sat", tagger).empty());
  EXPECT_EQ(extract_triplet_texts("water is composed of hydrogen", tagger),
            (std::vector<std::string>{"water is composed of hydrogen"}));
  const std::vector<std::string> toks = {"water", "is", "composed", "of", "hydrogen"};
  const auto ts = extract_triplets(toks, tagger.tag(toks));
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(span_text(toks, ts[0].relation), "is composed of");
  EXPECT_EQ(ts[0].arg1, (TokenSpan{0, 1}));
  EXPECT_EQ(ts[0].arg2, (TokenSpan{4, 5}));
  EXPECT_TRUE(extract_triplet_texts("", tagger).empty());
}

Embeddings toy_embeddings() {
  Embeddings e(2);
  e.add("cells", vec({1, 0}));
  e.add("contain", vec({1, 0}));
  e.add("dna", vec({0, 1}));
  e.add("rna", vec({1, 1}));
  e.add("water", vec({0, 1}));
  e.add("hydrogen", vec({0, 1}));
  e.add("cat", vec({1, 2}));
  e.add("dog", vec({2, 1}));
  return e;
}

TEST(WebScore, FixtureBehaviour) {
  const auto emb = toy_embeddings();
  FeatureResources r;
  r.embeddings = &emb;
  r.use_web_score = true;
  FixtureSearchBackend empty;
  r.search = &empty;
  EXPECT_EQ(web_search_score("cells contain ____", "dna", r).value, 0.5);
  EXPECT_TRUE(web_search_score("cells contain ____", "dna", r).neutral);

  FixtureSearchBackend verbatim;
  verbatim.add("cells contain dna", {{"cells contain dna", ""}});
  r.search = &verbatim;
  EXPECT_EQ(web_search_score("cells contain ____", "dna", r).value, 1.0);

  // Hand-computed: sentence triplet averages to (2/3, 1/3); candidates
  // average to (1, 1/3) and (0, 1). Max cosine is 7 / sqrt(50).
  FixtureSearchBackend two;
  two.add("cells contain dna", {{"cells contain rna", "nothing here"},
                                {"water is composed of hydrogen", ""}});
  r.search = &two;
  const auto s = web_search_score("cells contain ____", "dna", r);
  EXPECT_FALSE(s.neutral);
  EXPECT_NEAR(s.value, 7.0 / std::sqrt(50.0), 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(web_search_score("cells contain ____", "dna", r).value, s.value);

  FixtureSearchBackend no_triplets;
  no_triplets.add("cells contain dna", {{"hello", "the dog sat"}});
  r.search = &no_triplets;
  EXPECT_EQ(web_search_score("cells contain ____", "dna", r).value, 0.5);
  r.search = nullptr;
  EXPECT_EQ(web_search_score("cells contain ____", "dna", r).value, 0.5);
}

class ThrowingBackend : public SearchBackend {
 public:
  std::vector<SearchResult> search(const std::string&) const override {
    throw Error("search_failed", "boom");
  }
};

TEST(WebScore, BackendFailureIsNeutral) {
  const auto emb = toy_embeddings();
  ThrowingBackend b;
  FeatureResources r;
  r.embeddings = &emb;
  r.search = &b;
  r.use_web_score = true;
  EXPECT_EQ(web_search_score("cells contain ____", "dna", r).value, 0.5);
  EXPECT_EQ(extract_features("cells contain ____", "dna", "rna", r).values[kWebSearchScore], 0.5);
}

TEST(Features, HandExamples) {
  const auto emb = toy_embeddings();
  FeatureResources r;
  r.embeddings = &emb;
  auto f = extract_features("Cells contain ____ .", "dna", "dna", r).values;
  EXPECT_EQ(f[kEditDistanceAbs], 0.0);
  for (int s : {kLcpRelA, kLcpRelD, kLcsuffixRelA, kLcsuffixRelD, kLcsubseqRelA, kLcsubseqRelD}) {
    EXPECT_DOUBLE_EQ(f[s], 1.0) << feature_names()[s];
  }
  EXPECT_DOUBLE_EQ(f[kUnigramJaccardAd], 1.0);
  EXPECT_DOUBLE_EQ(f[kEmbSimAd], 1.0);

  f = extract_features("A ____ purrs.", "cat", "dog", r).values;
  EXPECT_EQ(f[kLcpAbs], 0.0);
  EXPECT_EQ(f[kLcsubseqAbs], 0.0);
  EXPECT_EQ(f[kCharBigramJaccardAd], 0.0);
  EXPECT_NEAR(f[kEmbSimAd], 4.0 / 5.0, 1e-12);

  f = extract_features("Enzymes are ____ .", "protein", "proteins", r).values;
  EXPECT_EQ(f[kLcpAbs], 7.0);
  EXPECT_DOUBLE_EQ(f[kLcpRelA], 1.0);
  EXPECT_DOUBLE_EQ(f[kLcpRelD], 7.0 / 8.0);
  EXPECT_EQ(f[kSingularPluralConsistency], 0.0);
}

TEST(Features, FallbacksAndErrors) {
  FeatureResources r;
  const auto x = extract_features("A ____ b", "cat", "dog", r);
  EXPECT_EQ(x.values[kEmbSimQd], 0.0);
  EXPECT_EQ(x.values[kEmbSimAd], 0.0);
  EXPECT_EQ(x.values[kCtxEmbSimAd], 0.0);
  EXPECT_TRUE(x.contextual_missing);
  EXPECT_EQ(x.values[kWebSearchScore], kNeutralWebScore);
  EXPECT_THROW(extract_features("A ____ b", "cat", "", r), ConfigError);
  EXPECT_EQ(feature_names().size(), 33u);
  EXPECT_EQ(feature_names()[kWebSearchScore], "web_search_score");
}

TEST(Features, FuzzContract) {
  const auto emb = toy_embeddings();
  const WindowContextualEmbedder ctx(emb);
  FrequencyTable freq;
  freq.add("cat", 10);
  freq.add("dna", 3);
  FeatureResources r;
  r.embeddings = &emb;
  r.contextual = &ctx;
  r.frequencies = &freq;
  Rng rng(77);
  for (int i = 0; i < 1500; ++i) {
    const std::string q = random_text(rng, 6) + " ____ " + random_text(rng, 4);
    const std::string a = random_text(rng), d = random_text(rng);
    const auto f = extract_features(q, a, d, r).values;
    const auto g = extract_features(q, d, a, r).values;
    for (int s = 0; s < kNumFeatures; ++s) {
      ASSERT_TRUE(std::isfinite(f[s])) << feature_names()[s];
      const auto [lo, hi] = feature_bounds(s);
      ASSERT_GE(f[s], lo) << feature_names()[s];
      ASSERT_LE(f[s], hi) << feature_names()[s];
      const int t = swapped_feature(s);
      if (t >= 0) {
        ASSERT_EQ(f[s], g[t]) << feature_names()[s] << " a=" << a << " d=" << d;
      }
    }
    ASSERT_LE(f[kLcpAbs], f[kLcsubseqAbs]);
    ASSERT_LE(f[kLcsuffixAbs], f[kLcsubseqAbs]);
  }
}

TEST(Embeddings, TextFormatRoundTrip) {
  std::stringstream in("2 3\nfoo 1 0 0\nBar 0 1 0\n");
  const auto e = Embeddings::read_text(in);
  EXPECT_EQ(e.size(), 2u);
  EXPECT_TRUE(e.contains("FOO"));
  EXPECT_TRUE(e.contains("Bar"));
  EXPECT_NEAR(text_similarity(e, "foo", "foo"), 1.0, 0);
  EXPECT_EQ(text_similarity(e, "foo", "zzz"), 0.0);
  std::stringstream out;
  e.write_text(out);
  std::stringstream again(out.str());
  EXPECT_EQ(Embeddings::read_text(again).size(), 2u);
  std::stringstream bad("1 3\nfoo 1 0\n");
  EXPECT_THROW(Embeddings::read_text(bad), ParseError);
}

TEST(Embeddings, FrequencyScaling) {
  FrequencyTable f;
  f.add("a", 99);
  f.add("b", 9);
  EXPECT_DOUBLE_EQ(f.log_scaled("a"), 1.0);
  EXPECT_NEAR(f.log_scaled("b"), std::log(10.0) / std::log(100.0), 1e-12);
  EXPECT_EQ(f.log_scaled("zzz"), 0.0);
}

TEST(Search, NormalizesBothResponseShapes) {
  auto a = normalize_search_response(
      nlohmann::json::parse(R"({"webPages":{"value":[{"name":"t","snippet":"s"}]}})"));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].title, "t");
  auto b = normalize_search_response(
      nlohmann::json::parse(R"({"results":[{"title":"x","snippet":"y"}]})"));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].snippet, "y");
  EXPECT_TRUE(normalize_search_response(nlohmann::json::object()).empty());
}

}  // namespace
}  // namespace dkit
