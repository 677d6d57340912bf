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

#ifndef DKIT_EMBEDDINGS_H_
#define DKIT_EMBEDDINGS_H_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dkit {

// Cosine similarity; 0 when either side is the zero vector. Computed as
// dot / sqrt(|x|^2 |y|^2) so that cosine(x, x) is exactly 1.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& x,
                                 const Eigen::MatrixBase<DerivedB>& y) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar nx = x.squaredNorm();
  const Scalar ny = y.squaredNorm();
  if (nx == Scalar(0) || ny == Scalar(0)) return Scalar(0);
  const Scalar c = x.dot(y) / std::sqrt(nx * ny);
  return std::clamp(c, Scalar(-1), Scalar(1));
}

// Static word vectors, text format: first line `V D`, then `word v1 ... vD`.
class Embeddings {
 public:
  explicit Embeddings(int dimension = 0) : dimension_(dimension) {}

  static Embeddings load_text(const std::string& path);
  static Embeddings read_text(std::istream& in,
                              const std::string& source = "<stream>");
  void write_text(std::ostream& out) const;

  // Replaces an existing entry.
  void add(std::string_view word, const Eigen::VectorXd& vector);

  int dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  // Exact match first, then the case-folded form.
  std::optional<Eigen::VectorXd> lookup(std::string_view word) const;
  bool contains(std::string_view word) const { return lookup(word).has_value(); }

  // Mean of the in-vocabulary token vectors; zero vector when none are known.
  Eigen::VectorXd average(const std::vector<std::string>& tokens) const;
  // average() over word_tokens(text).
  Eigen::VectorXd text_vector(std::string_view text) const;

 private:
  int dimension_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Eigen::VectorXd> vectors_;
};

// Cosine of the averaged static embeddings of two texts.
double text_similarity(const Embeddings& emb, std::string_view a,
                       std::string_view b);

// Unigram counts, `token<TAB>count` lines.
class FrequencyTable {
 public:
  static FrequencyTable load(const std::string& path);
  static FrequencyTable read(std::istream& in,
                             const std::string& source = "<stream>");

  void add(std::string_view token, std::int64_t count);
  std::int64_t count(std::string_view token) const;
  std::int64_t max_count() const { return max_count_; }
  std::size_t size() const { return counts_.size(); }

  // log(1 + mean token count of text) / log(1 + max count), in [0, 1].
  double log_scaled(std::string_view text) const;

 private:
  std::unordered_map<std::string, std::int64_t> counts_;
  std::int64_t max_count_ = 0;
};

// Contextual embedding port: a deterministic map from (sentence, byte span
// of the target inside it) to a fixed-dimension vector.
class ContextualEmbedder {
 public:
  virtual ~ContextualEmbedder() = default;
  virtual std::optional<Eigen::VectorXd> embed(std::string_view sentence,
                                               std::size_t begin,
                                               std::size_t end) const = 0;
};

// Span vector blended with the mean of up to `window` word vectors on each
// side; a lightweight stand-in when no neural encoder is available.
class WindowContextualEmbedder : public ContextualEmbedder {
 public:
  WindowContextualEmbedder(const Embeddings& embeddings, int window = 3,
                           double context_weight = 0.25)
      : embeddings_(embeddings), window_(window), context_weight_(context_weight) {}

  std::optional<Eigen::VectorXd> embed(std::string_view sentence,
                                       std::size_t begin,
                                       std::size_t end) const override;

 private:
  const Embeddings& embeddings_;
  int window_;
  double context_weight_;
};

// File-backed cache. Records are JSON lines {sentence, begin, end, vector}.
// Misses go to the optional backend and are appended to the file; without a
// backend a miss returns nullopt. Writes are serialized.
class CachedContextualEmbedder : public ContextualEmbedder {
 public:
  explicit CachedContextualEmbedder(std::string path,
                                    const ContextualEmbedder* backend = nullptr);

  std::optional<Eigen::VectorXd> embed(std::string_view sentence,
                                       std::size_t begin,
                                       std::size_t end) const override;

  std::size_t size() const;

 private:
  static std::string cache_key(std::string_view sentence, std::size_t begin,
                               std::size_t end);

  std::string path_;
  const ContextualEmbedder* backend_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, Eigen::VectorXd> cache_;
};

}  // namespace dkit

#endif  // DKIT_EMBEDDINGS_H_
