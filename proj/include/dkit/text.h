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

// String helpers shared by every module. Case folding is ASCII-only; bytes
// outside ASCII pass through unchanged and count as word characters.

#ifndef DKIT_TEXT_H_
#define DKIT_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dkit {

inline constexpr std::string_view kBlank = "____";

std::string casefold(std::string_view s);

// Lowercases, trims and collapses inner whitespace runs to one space.
std::string normalize_label(std::string_view s);

std::string trim(std::string_view s);

// Splits on ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

// Word tokens for tagging and triplet extraction: runs of word characters
// (alphanumerics, non-ASCII bytes, and inner '-' or '\''); every other
// non-space character becomes a one-character token. Case is preserved.
std::vector<std::string> tokenize_words(std::string_view s);

// Case-folded word tokens with punctuation dropped.
std::vector<std::string> word_tokens(std::string_view s);

// Tokens used for topic inference: lowercase, split on non-alphanumeric,
// tokens shorter than two characters dropped.
std::vector<std::string> topic_tokens(std::string_view s);

// Number of occurrences of the blank marker.
std::size_t count_blanks(std::string_view stem);

// Stem with the (single) blank replaced by `filler`.
std::string fill_blank(std::string_view stem, std::string_view filler);

// Stem with the blank removed.
std::string strip_blank(std::string_view stem);

// UTF-8 decoding; malformed sequences decode to U+FFFD.
std::u32string to_code_points(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// 64-bit FNV-1a; stable across platforms, used to derive per-item seeds.
std::uint64_t stable_hash(std::string_view s);

}  // namespace dkit

#endif  // DKIT_TEXT_H_
