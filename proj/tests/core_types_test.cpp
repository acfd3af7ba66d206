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

#include <random>
#include <vector>

#include "ctxattack/core_types.hpp"
#include "gtest/gtest.h"

namespace ctxattack {
namespace {

TEST(PredictionTest, ArgmaxTieGoesToLowestIndex) {
  const Prediction p = Prediction::from_scores({0.5, 0.5});
  EXPECT_EQ(p.predicted().id, 0u);
  EXPECT_EQ(Prediction::from_scores({0.2, 0.4, 0.4}).predicted().id, 1u);
}

TEST(PredictionTest, RejectsInvalidScores) {
  EXPECT_THROW(Prediction::from_scores({}), ProtocolError);
  EXPECT_THROW(Prediction::from_scores({0.7, 0.7}), ProtocolError);
  EXPECT_THROW(Prediction::from_scores({1.2, -0.2}), ProtocolError);
  EXPECT_NO_THROW(Prediction::from_scores({0.3, 0.7 + 5e-7}));
}

TEST(PredictionTest, ConfidenceOutsideClassesThrows) {
  const Prediction p = Prediction::from_scores({0.25, 0.75});
  EXPECT_DOUBLE_EQ(p.confidence(Label{1, std::nullopt}), 0.75);
  EXPECT_THROW(p.confidence(Label{2, std::nullopt}), Error);
}

// Positive rescaling followed by renormalization never moves the argmax.
TEST(PredictionPropertyTest, ArgmaxInvariantUnderRescaling) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0), scale(0.01, 100.0);
  std::uniform_int_distribution<int> classes(2, 6);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<double> w(static_cast<std::size_t>(classes(rng)));
    for (double& x : w) x = u(rng);
    if (iter % 5 == 0) w[1] = w[0];  // exercise ties
    const Prediction p = Prediction::from_weights(w);
    const double k = scale(rng);
    std::vector<double> scaled;
    for (double s : p.scores()) scaled.push_back(s * k);
    EXPECT_EQ(Prediction::from_weights(scaled).predicted().id, p.predicted().id);
  }
}

TEST(PerturbationTest, OneInTen) {
  const TokenizedText t = tokenize("a b c d e f g h i j");
  EXPECT_DOUBLE_EQ(perturbation_percentage(t, {{3, "d", "x"}}), 10.0);
}

TEST(PerturbationTest, NoSubstitutions) {
  EXPECT_DOUBLE_EQ(perturbation_percentage(tokenize("a b c"), {}), 0.0);
}

TEST(PerturbationTest, ThreeInForty) {
  std::string raw;
  for (int i = 0; i < 40; ++i) raw += "w ";
  const TokenizedText t = tokenize(raw);
  // 3 / 40 * 100 = 7.5
  EXPECT_DOUBLE_EQ(perturbation_percentage(t, {{0, "w", "x"}, {5, "w", "y"}, {39, "w", "z"}}), 7.5);
}

TEST(PerturbationTest, RepeatedIndexCountsOnce) {
  const TokenizedText t = tokenize("a b c d");
  EXPECT_DOUBLE_EQ(perturbation_percentage(t, {{1, "b", "x"}, {1, "b", "y"}}), 25.0);
}

TEST(PerturbationTest, PunctuationNotInDenominator) {
  const TokenizedText t = tokenize("good food .");
  EXPECT_DOUBLE_EQ(perturbation_percentage(t, {{0, "good", "fine"}}), 50.0);
  EXPECT_THROW(perturbation_percentage(t, {{9, "?", "x"}}), Error);
}

TEST(AttackConfigTest, DefaultsAreTheRecommendedSettings) {
  const AttackConfig c;
  EXPECT_EQ(c.K, 60u);
  EXPECT_EQ(c.window_half, 2u);
  EXPECT_EQ(c.M, 3u);
  EXPECT_EQ(c.N, 4u);
  EXPECT_DOUBLE_EQ(c.lambda, 1.0);
  EXPECT_DOUBLE_EQ(c.semantic_floor, 0.7);
  EXPECT_EQ(c.heuristic, ThresholdHeuristic::top_maxes_distance);
  EXPECT_NO_THROW(c.validate());
}

TEST(AttackConfigTest, RangesAreEnforced) {
  AttackConfig c;
  c.M = 5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = AttackConfig{};
  c.N = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = AttackConfig{};
  c.K = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = AttackConfig{};
  c.window_half = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(AttackConfigTest, HeuristicNamesRoundTrip) {
  for (auto h : {ThresholdHeuristic::average, ThresholdHeuristic::median, ThresholdHeuristic::top_n,
                 ThresholdHeuristic::top_maxes_distance, ThresholdHeuristic::constant}) {
    EXPECT_EQ(parse_heuristic(to_string(h)), h);
  }
  EXPECT_THROW(parse_heuristic("mode"), ConfigError);
}

TEST(DiffTest, ReportsChangedPositions) {
  const TokenizedText a = tokenize("the food was great");
  const TokenizedText b = a.with_word(3, "fine").with_word(1, "meal");
  const auto subs = diff_substitutions(a, b);
  ASSERT_EQ(subs.size(), 2u);
  EXPECT_EQ(subs[0], (Substitution{1, "food", "meal"}));
  EXPECT_EQ(subs[1], (Substitution{3, "great", "fine"}));
}

}  // namespace
}  // namespace ctxattack
