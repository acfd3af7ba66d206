/* Copyright 2026 The ctxattack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CTXATTACK_IMPORTANCE_HPP_
#define CTXATTACK_IMPORTANCE_HPP_

#include <algorithm>
#include <optional>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ctxattack/backends.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

inline bool is_stopword(std::string_view word) {
  static const std::unordered_set<std::string_view> kStopwords = {
      "a",     "an",    "and",   "are",   "as",    "at",    "be",    "been",  "but",
      "by",    "for",   "from",  "had",   "has",   "have",  "he",    "her",   "his",
      "i",     "if",    "in",    "into",  "is",    "it",    "its",   "me",    "my",
      "of",    "on",    "or",    "our",   "she",   "so",    "than",  "that",  "the",
      "their", "them",  "then",  "there", "these", "they",  "this",  "to",    "was",
      "we",    "were",  "what",  "when",  "which", "who",   "will",  "with",  "you",
      "your"};
  return kStopwords.count(to_lower(word)) != 0;
}

// Indices the attack is allowed to touch, in text order.
inline std::vector<std::size_t> attackable_indices(const TokenizedText& text,
                                                   bool exclude_stopwords = false) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!text.attackable(i)) continue;
    if (exclude_stopwords && is_stopword(text.word(i))) continue;
    out.push_back(i);
  }
  return out;
}

// Masks each attackable word in turn and records how much the truth-label
// confidence drops. Records come back sorted by drop, largest first, ties to
// the lower index; negative drops sort last.
//
// Costs one query per attackable word, plus one for the unmasked text unless
// its prediction is passed in as `baseline`.
inline std::vector<ImportanceRecord> rank_word_importance(
    const TokenizedText& text, const Label& truth, CountedTarget& target,
    const std::optional<Prediction>& baseline = std::nullopt, bool exclude_stopwords = false) {
  const double full =
      baseline ? baseline->confidence(truth) : target.predict(text).confidence(truth);
  std::vector<ImportanceRecord> records;
  for (std::size_t i : attackable_indices(text, exclude_stopwords)) {
    const double masked = target.predict(text.masked(i)).confidence(truth);
    records.push_back({i, full - masked});
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const ImportanceRecord& a, const ImportanceRecord& b) {
                     return a.delta > b.delta;
                   });
  return records;
}

inline std::vector<ImportanceRecord> rank_word_importance(const TokenizedText& text,
                                                          const Label& truth,
                                                          TargetModel& target) {
  CountedTarget counted(target);
  return rank_word_importance(text, truth, counted);
}

}  // namespace ctxattack

#endif  // CTXATTACK_IMPORTANCE_HPP_
