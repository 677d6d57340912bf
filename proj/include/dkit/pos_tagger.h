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

#ifndef DKIT_POS_TAGGER_H_
#define DKIT_POS_TAGGER_H_

#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dkit {

// Penn Treebank style tagging port. Implementations must be deterministic
// and safe for concurrent calls.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<std::string> tag(
      const std::vector<std::string>& tokens) const = 0;
};

// Lexicon lookup with suffix rules and a couple of contextual repairs for
// unknown verbs. Ships with a closed-class lexicon (determiners,
// prepositions, pronouns, auxiliaries, a few hundred frequent verbs); a
// `token<TAB>tag` file extends or overrides it.
class LexiconTagger : public PosTagger {
 public:
  LexiconTagger();

  // Throws ParseError on malformed lines; '#' lines are comments.
  static LexiconTagger from_file(const std::string& path);

  void add(std::string_view token, std::string_view tag);
  std::size_t lexicon_size() const { return lexicon_.size(); }
  const std::unordered_map<std::string, std::string>& lexicon() const {
    return lexicon_;
  }

  std::vector<std::string> tag(
      const std::vector<std::string>& tokens) const override;

 private:
  std::string guess(const std::string& token, bool sentence_initial) const;

  std::unordered_map<std::string, std::string> lexicon_;
};

// Shared LexiconTagger with the built-in lexicon only.
const PosTagger& default_pos_tagger();

// Coarse class of a tag: "NN", "VB", "JJ", "RB" for the open classes,
// otherwise the tag itself.
std::string coarse_tag(std::string_view tag);

bool is_plural_tag(std::string_view tag);
bool is_noun_tag(std::string_view tag);
bool is_verb_tag(std::string_view tag);

// Set of tags over the word tokens of `text`, tagged in isolation.
std::set<std::string> tag_set(const PosTagger& tagger, std::string_view text);

}  // namespace dkit

#endif  // DKIT_POS_TAGGER_H_
