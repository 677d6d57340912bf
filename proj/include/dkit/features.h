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

// Feature extraction for (stem q, key a, candidate d) triples.
//
// The 33 slots cover embedding similarity, contextual embedding similarity,
// morphology (edit distance, lengths, plurality, common prefix / suffix /
// subsequence), POS overlap, unigram frequency, token and character n-gram
// overlap, and the web-search reliability score. The slot layout is part of
// the serialized model format (kFeatureSchemaVersion).

#ifndef DKIT_FEATURES_H_
#define DKIT_FEATURES_H_

#include <Eigen/Dense>
#include <array>
#include <string>
#include <string_view>

namespace dkit {

class ContextualEmbedder;
class Embeddings;
class FrequencyTable;
class PosTagger;
class SearchBackend;

inline constexpr int kNumFeatures = 33;
inline constexpr int kFeatureSchemaVersion = 1;

using FeatureVector = Eigen::Matrix<double, kNumFeatures, 1>;

enum Feature : int {
  kEmbSimQd = 0,
  kEmbSimAd,
  kCtxEmbSimAd,
  kEditDistanceAbs,
  kEditDistanceRelA,
  kEditDistanceRelD,
  kTokenLenA,
  kTokenLenD,
  kTokenLenDiffAbs,
  kTokenLenRatio,
  kCharLenA,
  kCharLenD,
  kCharLenDiffAbs,
  kCharLenRatio,
  kSingularPluralConsistency,
  kLcpAbs,
  kLcpRelA,
  kLcpRelD,
  kLcsuffixAbs,
  kLcsuffixRelA,
  kLcsuffixRelD,
  kLcsubseqAbs,
  kLcsubseqRelA,
  kLcsubseqRelD,
  kPosJaccard,
  kLogFreqA,
  kLogFreqD,
  kLogFreqDiffAbs,
  kUnigramJaccardAd,
  kBigramJaccardAd,
  kTokenOverlapQdJaccard,
  kCharBigramJaccardAd,
  kWebSearchScore,
};

const std::array<std::string_view, kNumFeatures>& feature_names();

// Slots bounded to [-1, 1] (cosines) or [0, 1] (ratios, Jaccard, scores).
bool is_bounded_feature(int slot);
// Lower and upper bound of a bounded slot.
std::pair<double, double> feature_bounds(int slot);

// Slots whose value does not change when a and d are swapped. Swapping also
// exchanges the *_a / *_d slot pairs.
bool is_symmetric_feature(int slot);
// Partner slot under a <-> d exchange (itself for symmetric slots, -1 for
// slots that depend on q or d alone without a partner).
int swapped_feature(int slot);

inline constexpr double kNeutralWebScore = 0.5;

// String measures over case-folded code points.
int edit_distance(std::string_view a, std::string_view b);
int longest_common_prefix_length(std::string_view a, std::string_view b);
int longest_common_suffix_length(std::string_view a, std::string_view b);
int longest_common_subsequence_length(std::string_view a, std::string_view b);

// |tags(a) ∩ tags(d)| / |tags(a) ∪ tags(d)|, 0 when the union is empty.
double pos_jaccard(std::string_view a, std::string_view d,
                   const PosTagger& tagger);

// Resources are borrowed; any of them may be absent, in which case the
// affected slots use their declared fallbacks.
struct FeatureResources {
  const Embeddings* embeddings = nullptr;
  const ContextualEmbedder* contextual = nullptr;
  const FrequencyTable* frequencies = nullptr;
  const PosTagger* tagger = nullptr;  // built-in lexicon tagger when null
  const SearchBackend* search = nullptr;
  bool use_web_score = false;
};

struct WebScore {
  double value = kNeutralWebScore;
  bool neutral = true;  // no backend, failure, or an empty triplet set
};

// Max cosine similarity between triplets of the completed sentence and
// triplets found in search titles and snippets, clamped to [0, 1].
WebScore web_search_score(std::string_view stem, std::string_view candidate,
                          const FeatureResources& r);

struct FeatureExtraction {
  FeatureVector values = FeatureVector::Zero();
  bool contextual_missing = false;
  bool web_neutral = false;
};

// Throws ConfigError for an empty candidate; otherwise never fails.
FeatureExtraction extract_features(std::string_view stem, std::string_view key,
                                   std::string_view candidate,
                                   const FeatureResources& r);

}  // namespace dkit

#endif  // DKIT_FEATURES_H_
