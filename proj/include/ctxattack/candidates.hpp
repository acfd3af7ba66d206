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

#ifndef CTXATTACK_CANDIDATES_HPP_
#define CTXATTACK_CANDIDATES_HPP_

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "ctxattack/backends.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

// In-bounds neighbours within +-window_half of word_index, left to right.
inline std::vector<std::size_t> probe_positions(const TokenizedText& text, std::size_t word_index,
                                                std::size_t window_half) {
  std::vector<std::size_t> out;
  const std::size_t lo = word_index >= window_half ? word_index - window_half : 0;
  const std::size_t hi = std::min(text.size() - 1, word_index + window_half);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (j != word_index) out.push_back(j);
  }
  return out;
}

// The initial substitution set for one important word: the union of the
// top-K lists from one masked-LM probe per window neighbour. Order is first
// appearance, probes taken left to right. Non-alphabetic fills and the
// original word (any casing) are dropped, and duplicates are compared
// case-insensitively. A word without neighbours gets one direct probe.
inline std::vector<std::string> generate_candidates(const TokenizedText& text,
                                                    std::size_t word_index,
                                                    const AttackConfig& cfg,
                                                    MaskedLMProvider& mlm) {
  const std::string original = to_lower(text.word(word_index));
  std::unordered_set<std::string> seen{original};
  std::vector<std::string> out;
  auto absorb = [&](const std::vector<std::string>& fills) {
    for (const std::string& w : fills) {
      if (!is_alphabetic_word(w)) continue;
      if (seen.insert(to_lower(w)).second) out.push_back(w);
    }
  };
  const std::vector<std::size_t> neighbours = probe_positions(text, word_index, cfg.window_half);
  if (neighbours.empty()) {
    absorb(mlm.top_k(text, word_index, cfg.K));
    return out;
  }
  for (std::size_t j : neighbours) absorb(mlm.probe(text, word_index, j, cfg.K));
  return out;
}

}  // namespace ctxattack

#endif  // CTXATTACK_CANDIDATES_HPP_
