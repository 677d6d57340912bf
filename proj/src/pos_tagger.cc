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

#include "dkit/pos_tagger.h"

#include <fstream>
#include <utility>

#include "dkit/error.h"
#include "dkit/text.h"

namespace dkit {
namespace {

constexpr std::pair<const char*, const char*> kClosedClass[] = {
    {"the", "DT"},      {"a", "DT"},         {"an", "DT"},
    {"this", "DT"},     {"that", "DT"},      {"these", "DT"},
    {"those", "DT"},    {"some", "DT"},      {"any", "DT"},
    {"each", "DT"},     {"every", "DT"},     {"no", "DT"},
    {"all", "DT"},      {"both", "DT"},      {"another", "DT"},
    {"of", "IN"},       {"in", "IN"},        {"on", "IN"},
    {"at", "IN"},       {"by", "IN"},        {"for", "IN"},
    {"with", "IN"},     {"from", "IN"},      {"into", "IN"},
    {"onto", "IN"},     {"about", "IN"},     {"as", "IN"},
    {"than", "IN"},     {"through", "IN"},   {"during", "IN"},
    {"between", "IN"},  {"under", "IN"},     {"over", "IN"},
    {"after", "IN"},    {"before", "IN"},    {"around", "IN"},
    {"among", "IN"},    {"within", "IN"},    {"without", "IN"},
    {"like", "IN"},     {"across", "IN"},    {"against", "IN"},
    {"because", "IN"},  {"if", "IN"},        {"while", "IN"},
    {"since", "IN"},    {"until", "IN"},     {"per", "IN"},
    {"via", "IN"},      {"to", "TO"},        {"up", "RP"},
    {"out", "RP"},      {"off", "RP"},       {"down", "RP"},
    {"it", "PRP"},      {"they", "PRP"},     {"he", "PRP"},
    {"she", "PRP"},     {"we", "PRP"},       {"i", "PRP"},
    {"you", "PRP"},     {"them", "PRP"},     {"him", "PRP"},
    {"us", "PRP"},      {"me", "PRP"},       {"its", "PRP$"},
    {"their", "PRP$"},  {"his", "PRP$"},     {"her", "PRP$"},
    {"our", "PRP$"},    {"my", "PRP$"},      {"your", "PRP$"},
    {"is", "VBZ"},      {"are", "VBP"},      {"was", "VBD"},
    {"were", "VBD"},    {"be", "VB"},        {"been", "VBN"},
    {"being", "VBG"},   {"am", "VBP"},       {"has", "VBZ"},
    {"have", "VBP"},    {"had", "VBD"},      {"does", "VBZ"},
    {"do", "VBP"},      {"did", "VBD"},      {"can", "MD"},
    {"could", "MD"},    {"will", "MD"},      {"would", "MD"},
    {"may", "MD"},      {"might", "MD"},     {"must", "MD"},
    {"should", "MD"},   {"shall", "MD"},     {"and", "CC"},
    {"or", "CC"},       {"but", "CC"},       {"nor", "CC"},
    {"which", "WDT"},   {"who", "WP"},       {"what", "WP"},
    {"whom", "WP"},     {"whose", "WP$"},    {"where", "WRB"},
    {"when", "WRB"},    {"how", "WRB"},      {"why", "WRB"},
    {"not", "RB"},      {"very", "RB"},      {"also", "RB"},
    {"often", "RB"},    {"usually", "RB"},   {"most", "RBS"},
    {"more", "RBR"},    {"only", "RB"},      {"there", "EX"},
    {"many", "JJ"},     {"much", "JJ"},      {"few", "JJ"},
    {"other", "JJ"},    {"such", "JJ"},      {"same", "JJ"},
    {"made", "VBN"},    {"found", "VBN"},    {"known", "VBN"},
    {"called", "VBN"},  {"built", "VBN"},    {"taken", "VBN"},
    {"given", "VBN"},   {"seen", "VBN"},     {"sat", "VBD"},
    {"ate", "VBD"},     {"ran", "VBD"},      {"went", "VBD"},
    {"came", "VBD"},    {"took", "VBD"},     {"gave", "VBD"},
    {"saw", "VBD"},     {"grew", "VBD"},     {"grown", "VBN"},
    {"began", "VBD"},   {"begun", "VBN"},    {"became", "VBD"},
    {"wrote", "VBD"},   {"written", "VBN"},  {"one", "CD"},
    {"two", "CD"},      {"three", "CD"},     {"four", "CD"},
    {"five", "CD"},     {"ten", "CD"},       {"hundred", "CD"},
};

// Regular verbs; inflections are generated.
constexpr const char* kVerbs[] = {
    "contain", "produce", "make",    "use",     "form",     "cause",
    "help",    "need",    "become",  "take",    "give",     "absorb",
    "release", "convert", "carry",   "transport", "protect", "provide",
    "consist", "compose", "create",  "allow",   "require",  "include",
    "store",   "digest",  "break",   "build",   "move",     "live",
    "eat",     "feed",    "grow",    "orbit",   "rotate",   "reflect",
    "emit",    "detect",  "measure", "control", "regulate", "pump",
    "filter",  "attract", "repel",   "heat",    "cool",     "melt",
    "freeze",  "boil",    "evaporate", "dissolve", "react",  "combine",
    "separate", "divide", "multiply", "increase", "decrease", "reduce",
    "invent",  "discover", "write",  "call",    "name",     "know",
    "find",    "see",     "say",     "show",    "play",     "win",
    "lose",    "sit",     "run",     "go",      "come",     "swim",
    "fly",     "lay",     "bear",    "hunt",    "travel",   "connect",
    "surround", "cover",  "support", "depend",  "belong",   "occur",
    "exist",   "appear",  "lead",    "result",  "mean",     "represent",
    "replace", "prevent", "kill",    "infect",  "transmit", "pollinate",
    "photosynthesize", "breathe", "inhale", "exhale", "speak", "fight",
};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool has_digit(std::string_view s) {
  for (char c : s)
    if (c >= '0' && c <= '9') return true;
  return false;
}

bool all_upper(std::string_view s) {
  bool any = false;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') any = true;
  }
  return any;
}

}  // namespace

LexiconTagger::LexiconTagger() {
  for (const auto& [tok, tag] : kClosedClass) lexicon_.emplace(tok, tag);
  for (std::string_view base_view : kVerbs) {
    const std::string base(base_view);
    auto put = [&](const std::string& form, const char* tag) {
      lexicon_.emplace(form, tag);
    };
    put(base, "VBP");
    const char last = base.back();
    const bool consonant_y =
        last == 'y' && base.size() > 1 && !is_vowel(base[base.size() - 2]);
    if (consonant_y) {
      const std::string stem = base.substr(0, base.size() - 1);
      put(stem + "ies", "VBZ");
      put(stem + "ied", "VBD");
    } else if (ends_with(base, "s") || ends_with(base, "sh") ||
               ends_with(base, "ch") || ends_with(base, "x") ||
               ends_with(base, "o")) {
      put(base + "es", "VBZ");
      put(base + "ed", "VBD");
    } else {
      put(base + "s", "VBZ");
      put(last == 'e' ? base + "d" : base + "ed", "VBD");
    }
    put(last == 'e' && base != "be" ? base.substr(0, base.size() - 1) + "ing"
                                    : base + "ing",
        "VBG");
  }
}

LexiconTagger LexiconTagger::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tagger lexicon: " + path);
  LexiconTagger tagger;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cols = split(t, '\t');
    if (cols.size() != 2 || trim(cols[0]).empty() || trim(cols[1]).empty()) {
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected token<TAB>tag");
    }
    tagger.add(cols[0], trim(cols[1]));
  }
  return tagger;
}

void LexiconTagger::add(std::string_view token, std::string_view tag) {
  lexicon_[casefold(trim(token))] = std::string(tag);
}

std::string LexiconTagger::guess(const std::string& token,
                                 bool sentence_initial) const {
  const auto c0 = static_cast<unsigned char>(token[0]);
  const bool wordish = (c0 >= '0' && c0 <= '9') || (c0 >= 'a' && c0 <= 'z') ||
                       (c0 >= 'A' && c0 <= 'Z') || c0 >= 0x80;
  if (!wordish) return token;  // punctuation tags as itself
  if (has_digit(token)) return "CD";
  if (token.size() >= 2 && all_upper(token)) return "NNP";
  if (!sentence_initial && c0 >= 'A' && c0 <= 'Z') return "NNP";
  const std::string w = casefold(token);
  if (w.size() > 4 && ends_with(w, "ing")) return "VBG";
  if (w.size() > 3 && ends_with(w, "ed")) return "VBN";
  if (w.size() > 3 && ends_with(w, "ly")) return "RB";
  for (const char* suffix :
       {"ous", "ful", "able", "ible", "ive", "less", "ical", "ic", "al"}) {
    if (w.size() > std::string_view(suffix).size() + 2 && ends_with(w, suffix))
      return "JJ";
  }
  if (w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss") &&
      !ends_with(w, "us") && !ends_with(w, "is")) {
    return "NNS";
  }
  return "NN";
}

std::vector<std::string> LexiconTagger::tag(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> tags(tokens.size());
  std::vector<bool> known(tokens.size(), false);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) {
      tags[i] = "NN";
      continue;
    }
    const auto it = lexicon_.find(casefold(tokens[i]));
    if (it != lexicon_.end()) {
      tags[i] = it->second;
      known[i] = true;
    } else {
      tags[i] = guess(tokens[i], i == 0);
    }
  }
  // Contextual repairs.
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string prev = i > 0 ? tags[i - 1] : "";
    const std::string next = i + 1 < tags.size() ? tags[i + 1] : "";
    // Noun readings of verb-lexicon words after a determiner or adjective.
    if ((tags[i] == "VBP" || tags[i] == "VBZ") &&
        (prev == "DT" || prev == "PRP$" || prev == "JJ")) {
      tags[i] = tags[i] == "VBZ" ? "NNS" : "NN";
      continue;
    }
    // Unknown noun-looking word between a subject and an object.
    if (!known[i] && (tags[i] == "NN" || tags[i] == "NNS") && i > 0 &&
        (is_noun_tag(prev) || prev == "PRP") &&
        (next == "DT" || next == "JJ" || next == "CD" || next == "PRP$" ||
         is_noun_tag(next))) {
      tags[i] = tags[i] == "NNS" ? "VBZ" : "VBP";
    }
  }
  return tags;
}

std::string coarse_tag(std::string_view tag) {
  for (const char* open : {"NN", "VB", "JJ", "RB"}) {
    if (tag.substr(0, 2) == open) return open;
  }
  return std::string(tag);
}

bool is_plural_tag(std::string_view tag) {
  return tag == "NNS" || tag == "NNPS";
}

bool is_noun_tag(std::string_view tag) { return tag.substr(0, 2) == "NN"; }

bool is_verb_tag(std::string_view tag) { return tag.substr(0, 2) == "VB"; }

std::set<std::string> tag_set(const PosTagger& tagger, std::string_view text) {
  std::vector<std::string> words;
  for (auto& t : tokenize_words(text)) {
    const auto c = static_cast<unsigned char>(t[0]);
    const bool wordish = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                         (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (wordish) words.push_back(std::move(t));
  }
  const auto tags = tagger.tag(words);
  return {tags.begin(), tags.end()};
}

const PosTagger& default_pos_tagger() {
  static const LexiconTagger tagger;
  return tagger;
}

}  // namespace dkit
