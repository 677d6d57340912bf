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

// Open relation extraction with the ReVerb syntactic constraint: a relation
// phrase is a verb group, optionally followed by nouns/adjectives/adverbs/
// pronouns/determiners and a closing preposition or particle
// (V | V P | V W* P), longest match first. Arguments are the noun phrases
// immediately left and right of the relation.

#ifndef DKIT_OPENIE_H_
#define DKIT_OPENIE_H_

#include <string>
#include <string_view>
#include <vector>

namespace dkit {

class PosTagger;

struct TokenSpan {
  std::size_t begin = 0;  // token index, inclusive
  std::size_t end = 0;    // exclusive

  bool empty() const { return end <= begin; }
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct Triplet {
  TokenSpan arg1;
  TokenSpan relation;
  TokenSpan arg2;
};

// `tags` must be parallel to `tokens`.
std::vector<Triplet> extract_triplets(const std::vector<std::string>& tokens,
                                      const std::vector<std::string>& tags);

std::string span_text(const std::vector<std::string>& tokens, TokenSpan span);

// "arg1 relation arg2".
std::string triplet_text(const std::vector<std::string>& tokens,
                         const Triplet& t);

// Splits `text` into sentences, tags them and returns the texts of every
// extracted triplet in order.
std::vector<std::string> extract_triplet_texts(std::string_view text,
                                               const PosTagger& tagger);

}  // namespace dkit

#endif  // DKIT_OPENIE_H_
