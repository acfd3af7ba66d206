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

#include <algorithm>
#include <set>

#include "ctxattack/candidates.hpp"
#include "ctxattack/stub_backends.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace ctxattack {
namespace {

// Records every probe so tests can see which positions were visited.
class RecordingMLM : public TableMaskedLM {
 public:
  using TableMaskedLM::TableMaskedLM;
  std::vector<std::string> probe(const TokenizedText& text, std::size_t target_index,
                                 std::size_t neighbor_index, std::size_t k) override {
    neighbours.push_back(neighbor_index);
    return TableMaskedLM::probe(text, target_index, neighbor_index, k);
  }
  std::vector<std::size_t> neighbours;
};

TEST(CandidatesTest, BoundaryWordProbesRightNeighboursOnly) {
  RecordingMLM mlm(std::map<std::string, std::vector<std::string>>{{"great", {"good"}}});
  AttackConfig cfg;
  generate_candidates(tokenize("great food here today"), 0, cfg, mlm);
  EXPECT_EQ(mlm.neighbours, (std::vector<std::size_t>{1, 2}));
}

TEST(CandidatesTest, DisjointListsGiveUnionOfTwelve) {
  RecordingMLM mlm(std::map<std::string, std::vector<std::string>>{
      {"x|a", {"aa", "ab", "ac"}},
      {"x|b", {"ba", "bb", "bc"}},
      {"x|c", {"ca", "cb", "cc"}},
      {"x|d", {"da", "db", "dc"}}});
  AttackConfig cfg;
  cfg.K = 3;
  const auto sc = generate_candidates(tokenize("a b x c d"), 2, cfg, mlm);
  EXPECT_EQ(sc.size(), 12u);
  EXPECT_EQ(mlm.neighbours.size(), 4u);
  EXPECT_EQ(sc.front(), "aa");
  EXPECT_EQ(sc.back(), "dc");
}

TEST(CandidatesTest, ExcludesOriginalPunctuationAndDuplicates) {
  TableMaskedLM mlm({{"great", {"Great", "good", ",", "GOOD", "fine"}}});
  AttackConfig cfg;
  const auto sc = generate_candidates(tokenize("so great here"), 1, cfg, mlm);
  EXPECT_EQ(sc, (std::vector<std::string>{"good", "fine"}));
}

TEST(CandidatesTest, LoneWordGetsDirectProbe) {
  TableMaskedLM mlm({{"great", {"good", "fine"}}});
  AttackConfig cfg;
  EXPECT_EQ(generate_candidates(tokenize("great"), 0, cfg, mlm),
            (std::vector<std::string>{"good", "fine"}));
}

TEST(CandidatesTest, DefaultKIsSixty) { EXPECT_EQ(AttackConfig{}.K, 60u); }

TEST(CandidatesPropertyTest, DuplicateFreeAndSubsetMonotone) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::Scenario s = testing::random_scenario(seed);
    for (std::size_t i : attackable_indices(s.sample)) {
      std::set<std::string> prev;
      for (std::size_t w = 1; w <= 4; ++w) {
        AttackConfig cfg = s.cfg;
        cfg.window_half = w;
        const auto sc = generate_candidates(s.sample, i, cfg, *s.suite.masked_lm);
        std::set<std::string> lowered;
        for (const auto& c : sc) {
          EXPECT_NE(to_lower(c), to_lower(s.sample.word(i)));
          EXPECT_TRUE(is_alphabetic_word(c));
          EXPECT_TRUE(lowered.insert(to_lower(c)).second);
        }
        if (probe_positions(s.sample, i, w).size() > 0) {
          EXPECT_TRUE(std::includes(lowered.begin(), lowered.end(), prev.begin(), prev.end()));
        }
        prev = lowered;
      }
    }
  }
}

TEST(CandidatesPropertyTest, InteriorWordWindowTwoIssuesFourProbes) {
  RecordingMLM mlm(std::map<std::string, std::vector<std::string>>{});
  AttackConfig cfg;
  generate_candidates(tokenize("one two three four five six"), 2, cfg, mlm);
  EXPECT_EQ(mlm.neighbours, (std::vector<std::size_t>{0, 1, 3, 4}));
}

}  // namespace
}  // namespace ctxattack
