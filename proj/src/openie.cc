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

#include "dkit/openie.h"

#include "dkit/error.h"
#include "dkit/pos_tagger.h"
#include "dkit/text.h"

namespace dkit {
namespace {

bool verbish(const std::string& tag) { return is_verb_tag(tag) || tag == "MD"; }

bool preposition(const std::string& tag) {
  return tag == "IN" || tag == "TO" || tag == "RP";
}

// W in the relation pattern.
bool filler(const std::string& tag) {
  return is_noun_tag(tag) || tag.rfind("JJ", 0) == 0 || tag.rfind("RB", 0) == 0 ||
         tag == "PRP" || tag == "PRP$" || tag == "DT";
}

bool np_token(const std::string& tag) {
  return is_noun_tag(tag) || tag.rfind("JJ", 0) == 0 || tag == "DT" ||
         tag == "PRP$" || tag == "PRP" || tag == "CD" || tag == "POS";
}

bool np_head(const std::string& tag) {
  return is_noun_tag(tag) || tag == "PRP" || tag == "CD";
}

bool sentence_end(const std::string& token) {
  return token == "." || token == "!" || token == "?" || token == ";";
}

}  // namespace

std::vector<Triplet> extract_triplets(const std::vector<std::string>& tokens,
                                      const std::vector<std::string>& tags) {
  if (tokens.size() != tags.size()) {
    throw ConfigError("tokens and tags must have the same length");
  }
  const std::size_t n = tokens.size();
  std::vector<Triplet> out;
  std::size_t i = 0;
  while (i < n) {
    if (!verbish(tags[i])) {
      ++i;
      continue;
    }
    const std::size_t rel_begin = i;
    std::size_t j = i;
    // Verb group: verbs and modals, adverbs only between verbs, a particle.
    while (j < n) {
      if (verbish(tags[j])) {
        ++j;
      } else if (tags[j].rfind("RB", 0) == 0 && j + 1 < n && verbish(tags[j + 1])) {
        ++j;
      } else {
        break;
      }
    }
    if (j < n && tags[j] == "RP") ++j;
    const std::size_t verb_end = j;

    std::size_t rel_end = verb_end;
    std::size_t k = verb_end;
    while (k < n && filler(tags[k])) ++k;
    if (k < n && preposition(tags[k])) rel_end = k + 1;

    // arg1: noun phrase ending right before the relation.
    std::size_t a1 = rel_begin;
    while (a1 > 0 && np_token(tags[a1 - 1])) --a1;
    bool arg1_ok = false;
    for (std::size_t t = a1; t < rel_begin; ++t) arg1_ok = arg1_ok || np_head(tags[t]);

    // arg2: noun phrase starting right after the relation.
    std::size_t a2 = rel_end;
    while (a2 < n && np_token(tags[a2])) ++a2;
    bool arg2_ok = false;
    for (std::size_t t = rel_end; t < a2; ++t) arg2_ok = arg2_ok || np_head(tags[t]);

    if (arg1_ok && arg2_ok) {
      out.push_back({{a1, rel_begin}, {rel_begin, rel_end}, {rel_end, a2}});
    }
    i = std::max(verb_end, rel_begin + 1);
  }
  return out;
}

std::string span_text(const std::vector<std::string>& tokens, TokenSpan span) {
  std::string out;
  for (std::size_t i = span.begin; i < span.end && i < tokens.size(); ++i) {
    if (!out.empty()) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string triplet_text(const std::vector<std::string>& tokens,
                         const Triplet& t) {
  return span_text(tokens, t.arg1) + " " + span_text(tokens, t.relation) + " " +
         span_text(tokens, t.arg2);
}

std::vector<std::string> extract_triplet_texts(std::string_view text,
                                               const PosTagger& tagger) {
  std::vector<std::string> out;
  const auto all = tokenize_words(text);
  std::vector<std::string> sentence;
  auto flush = [&] {
    if (sentence.empty()) return;
    const auto tags = tagger.tag(sentence);
    for (const auto& t : extract_triplets(sentence, tags)) {
      out.push_back(triplet_text(sentence, t));
    }
    sentence.clear();
  };
  for (const auto& tok : all) {
    if (sentence_end(tok)) {
      flush();
    } else {
      sentence.push_back(tok);
    }
  }
  flush();
  return out;
}

}  // namespace dkit
