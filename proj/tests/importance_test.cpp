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
#include <random>

#include "ctxattack/importance.hpp"
#include "ctxattack/stub_backends.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace ctxattack {
namespace {

const Label kPositive{1, std::nullopt};

TEST(ImportanceTest, SingleWord) {
  // p(full) = 0.9, p(masked) = 0.4.
  KeywordTarget t = KeywordTarget::binary(0.4, {{"superb", 0.5}});
  const auto r = rank_word_importance(tokenize("superb"), kPositive, t);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].word_index, 0u);
  EXPECT_NEAR(r[0].delta, 0.5, 1e-12);
}

TEST(ImportanceTest, InvisibleWordHasZeroDelta) {
  KeywordTarget t = KeywordTarget::binary(0.5, {{"great", 0.3}});
  const auto r = rank_word_importance(tokenize("great meal"), kPositive, t);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1].word_index, 1u);
  EXPECT_DOUBLE_EQ(r[1].delta, 0.0);
}

TEST(ImportanceTest, GreatFoodHereMatchesExhaustiveMasking) {
  KeywordTarget t = KeywordTarget::binary(0.5, {{"great", 0.3}, {"food", 0.1}});
  const TokenizedText text = tokenize("great food here");
  const double full = t.predict(text).confidence(kPositive);
  std::vector<std::pair<double, std::size_t>> oracle;
  for (std::size_t i = 0; i < text.size(); ++i) {
    oracle.push_back({-(full - t.predict(text.masked(i)).confidence(kPositive)), i});
  }
  std::sort(oracle.begin(), oracle.end());
  const auto r = rank_word_importance(text, kPositive, t);
  ASSERT_EQ(r.size(), oracle.size());
  EXPECT_EQ(r[0].word_index, 0u);
  for (std::size_t k = 0; k < r.size(); ++k) EXPECT_EQ(r[k].word_index, oracle[k].second);
}

TEST(ImportanceTest, NegativeDeltasSortLast) {
  KeywordTarget t = KeywordTarget::binary(0.5, {{"bad", -0.2}, {"great", 0.3}});
  const auto r = rank_word_importance(tokenize("bad okay great"), kPositive, t);
  EXPECT_EQ(r.front().word_index, 2u);
  EXPECT_EQ(r.back().word_index, 0u);
  EXPECT_LT(r.back().delta, 0.0);
}

TEST(ImportanceTest, QueryCountIsOnePlusAttackable) {
  auto inner = std::make_shared<KeywordTarget>(KeywordTarget::binary(0.5, {{"great", 0.3}}));
  testing::InstrumentedTarget t(inner);
  rank_word_importance(tokenize("the food , was great !"), kPositive, t);
  EXPECT_EQ(t.calls(), 5u);

  CountedTarget counted(*inner);
  const Prediction base = inner->predict(tokenize("the food was great"));
  rank_word_importance(tokenize("the food was great"), kPositive, counted, base);
  EXPECT_EQ(counted.count(), 4u);
}

TEST(ImportanceTest, StopwordExclusion) {
  KeywordTarget t = KeywordTarget::binary(0.5, {});
  CountedTarget counted(t);
  const auto r = rank_word_importance(tokenize("the food was great"), kPositive, counted,
                                      std::nullopt, true);
  ASSERT_EQ(r.size(), 2u);
}

TEST(ImportancePropertyTest, PermutationOfAttackableIndices) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    testing::Scenario s = testing::random_scenario(seed);
    const auto r = rank_word_importance(s.sample, s.truth, *s.suite.target);
    std::vector<std::size_t> got;
    for (const auto& rec : r) got.push_back(rec.word_index);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, attackable_indices(s.sample));
    for (std::size_t k = 1; k < r.size(); ++k) {
      EXPECT_GE(r[k - 1].delta, r[k].delta);
      if (r[k - 1].delta == r[k].delta) EXPECT_LT(r[k - 1].word_index, r[k].word_index);
    }
  }
}

std::size_t rank_of(const std::vector<ImportanceRecord>& r, std::size_t index) {
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k].word_index == index) return k;
  }
  return r.size();
}

// Raising one keyword's weight toward the truth class never lowers its rank.
TEST(ImportancePropertyTest, MonotoneInKeywordWeight) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> w(-0.2, 0.2), bump(0.0, 0.3);
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "omega"};
  for (int iter = 0; iter < 300; ++iter) {
    std::map<std::string, double> pol;
    for (const auto& x : words) pol[x] = w(rng);
    const TokenizedText text = tokenize("alpha beta gamma delta omega");
    const std::size_t target_word = static_cast<std::size_t>(iter % 5);
    KeywordTarget before = KeywordTarget::binary(0.5, pol);
    pol[words[target_word]] += bump(rng);
    KeywordTarget after = KeywordTarget::binary(0.5, pol);
    const Label truth = before.predict(text).predicted();
    if (after.predict(text).predicted() != truth) continue;
    // The bump must push toward the truth class.
    if (truth.id == 0) continue;
    const auto r0 = rank_word_importance(text, truth, before);
    const auto r1 = rank_word_importance(text, truth, after);
    EXPECT_LE(rank_of(r1, target_word), rank_of(r0, target_word));
  }
}

}  // namespace
}  // namespace ctxattack
