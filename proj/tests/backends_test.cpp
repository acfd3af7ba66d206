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

#include <memory>

#include "ctxattack/backends.hpp"
#include "ctxattack/stub_backends.hpp"
#include "gtest/gtest.h"

namespace ctxattack {
namespace {

TEST(KeywordTargetTest, GreatFood) {
  // prior 0.5, great +0.3, food +0.1 -> positive 0.9, negative 0.1.
  KeywordTarget t = KeywordTarget::binary(0.5, {{"great", 0.3}, {"food", 0.1}});
  const Prediction p = t.predict(tokenize("great food"));
  EXPECT_NEAR(p.scores()[1], 0.9, 1e-12);
  EXPECT_NEAR(p.scores()[0], 0.1, 1e-12);
  EXPECT_EQ(p.predicted().id, 1u);
}

TEST(KeywordTargetTest, CompanionWordsCount) {
  KeywordTarget t = KeywordTarget::binary(0.5, {{"great", 0.3}});
  const TokenizedText with = tokenize("fine").with_companion({"great", true});
  EXPECT_NEAR(t.predict(with).scores()[1], 0.8, 1e-12);
}

TEST(KeywordTargetTest, ClipsAtMinimum) {
  KeywordTarget t = KeywordTarget::binary(0.5, {{"awful", -0.9}});
  const Prediction p = t.predict(tokenize("awful"));
  EXPECT_GT(p.scores()[1], 0.0);
  EXPECT_LT(p.scores()[1], 1e-8);
}

TEST(UniformTargetTest, TieBreaksToClassZero) {
  UniformTarget t(2);
  const Prediction p = t.predict(tokenize("anything at all"));
  EXPECT_DOUBLE_EQ(p.scores()[0], 0.5);
  EXPECT_DOUBLE_EQ(p.scores()[1], 0.5);
  EXPECT_EQ(p.predicted().id, 0u);
}

TEST(TableMaskedLMTest, TopK) {
  TableMaskedLM mlm({{"great", {"good", "fine", "nice"}}});
  const TokenizedText t = tokenize("great food");
  EXPECT_EQ(mlm.top_k(t, 0, 2), (std::vector<std::string>{"good", "fine"}));
}

TEST(TableMaskedLMTest, ExhaustionReturnsFullListWithoutPadding) {
  TableMaskedLM mlm({{"great", {"good", "fine", "nice"}}});
  EXPECT_EQ(mlm.top_k(tokenize("great food"), 0, 10).size(), 3u);
}

TEST(TableMaskedLMTest, SingleWordTextUsesEmptyContext) {
  TableMaskedLM mlm({{"hello", {"hi", "hey"}}});
  EXPECT_EQ(mlm.top_k(tokenize("hello"), 0, 5), (std::vector<std::string>{"hi", "hey"}));
}

TEST(TableMaskedLMTest, FiltersArtifactsAndDuplicates) {
  TableMaskedLM mlm({{"great", {"##ly", "good", "good", "42", ",", "fine"}}});
  EXPECT_EQ(mlm.top_k(tokenize("great"), 0, 10), (std::vector<std::string>{"good", "fine"}));
}

TEST(TableMaskedLMTest, NeighbourKeyTakesPrecedence) {
  TableMaskedLM mlm({{"great", {"good"}}, {"great|food", {"tasty"}}});
  const TokenizedText t = tokenize("great food here");
  EXPECT_EQ(mlm.probe(t, 0, 1, 5), (std::vector<std::string>{"tasty"}));
  EXPECT_EQ(mlm.probe(t, 0, 2, 5), (std::vector<std::string>{"good"}));
}

TEST(BagOfWordsEmbedderTest, DeterministicSymmetricAndSized) {
  BagOfWordsEmbedder e;
  EXPECT_EQ(e.dimension(), 512u);
  EXPECT_EQ(e.embed("the food was great"), e.embed("the food was great"));
  EXPECT_EQ(e.embed("a b"), e.embed("b a"));
  EXPECT_EQ(e.embed("a b").size(), 512u);
}

TEST(BagOfWordsEmbedderTest, ExplicitVectorsAreSummed) {
  BagOfWordsEmbedder e(2, {{"x", {1.0, 0.0}}, {"y", {0.0, 2.0}}});
  EXPECT_EQ(e.embed("x y ."), (std::vector<double>{1.0, 2.0}));
  EXPECT_THROW(BagOfWordsEmbedder(2, {{"z", {1.0}}}), Error);
}

TEST(BigramFluencyTest, TableFloorAndUnigram) {
  BigramFluency f({{"very", 0.05}}, {{{"very", "good"}, 0.3}});
  const TokenizedText t = tokenize("very good");
  EXPECT_DOUBLE_EQ(f.word_probability(t, 1, "good"), 0.3);
  EXPECT_DOUBLE_EQ(f.word_probability(t, 1, "zebra"), 1e-8);
  EXPECT_DOUBLE_EQ(f.word_probability(t, 0, "very"), 0.05);
  EXPECT_DOUBLE_EQ(f.word_probability(t, 0, "good"), 1e-8);
}

TEST(BigramFluencyTest, OnlyLeftContextMatters) {
  BigramFluency f({}, {{{"very", "good"}, 0.3}});
  EXPECT_DOUBLE_EQ(f.word_probability(tokenize("very good food"), 1, "good"),
                   f.word_probability(tokenize("very good service"), 1, "good"));
}

TEST(LexiconPosTaggerTest, TagsFromLexicon) {
  LexiconPosTagger tagger({{"shops", noun(GrammaticalNumber::plural)},
                           {"clinic", noun(GrammaticalNumber::singular)},
                           {"watched", verb("watch")}});
  const TokenizedText t = tokenize("I had not been to the clinic , shops watched");
  EXPECT_EQ(tagger.tag_in_context(t, 6), noun(GrammaticalNumber::singular));
  EXPECT_EQ(tagger.tag_in_context(t, 8), noun(GrammaticalNumber::plural));
  EXPECT_EQ(tagger.tag_in_context(t, 9).lemma, "watch");
  EXPECT_EQ(tagger.tag_in_context(t, 7).tag, PosTag::punct);
  EXPECT_EQ(tagger.tag_in_context(t, 8), tagger.tag_in_context(t, 8));
}

TEST(InflectionTest, RegularAndIrregular) {
  EXPECT_EQ(inflect_english_number("shop", GrammaticalNumber::plural), "shops");
  EXPECT_EQ(inflect_english_number("city", GrammaticalNumber::plural), "cities");
  EXPECT_EQ(inflect_english_number("box", GrammaticalNumber::plural), "boxes");
  EXPECT_EQ(inflect_english_number("cities", GrammaticalNumber::singular), "city");
  EXPECT_EQ(inflect_english_number("shops", GrammaticalNumber::singular), "shop");
  LexiconPosTagger tagger({}, {{"child", "children"}});
  EXPECT_EQ(tagger.inflect_number("child", GrammaticalNumber::plural), "children");
  EXPECT_EQ(tagger.inflect_number("children", GrammaticalNumber::singular), "child");
}

TEST(CountedTargetTest, CountsEveryCallAndEnforcesBudget) {
  UniformTarget inner(2);
  CountedTarget counted(inner, 2);
  const TokenizedText t = tokenize("x");
  counted.predict(t);
  counted.predict(t);
  EXPECT_EQ(counted.count(), 2u);
  EXPECT_THROW(counted.predict(t), BudgetExhausted);
  EXPECT_EQ(counted.count(), 2u);
}

class NonReentrantTarget : public UniformTarget {
 public:
  NonReentrantTarget() : UniformTarget(2) {}
  bool reentrant() const override { return false; }
};

TEST(SerializationTest, OnlyNonReentrantBackendsAreWrapped) {
  BackendSuite s;
  s.target = std::make_shared<NonReentrantTarget>();
  s.masked_lm = std::make_shared<TableMaskedLM>(std::map<std::string, std::vector<std::string>>{});
  s.embedder = std::make_shared<BagOfWordsEmbedder>();
  s.fluency = std::make_shared<BigramFluency>(std::map<std::string, double>{},
                                              std::map<std::pair<std::string, std::string>, double>{});
  s.pos_tagger = std::make_shared<LexiconPosTagger>(std::map<std::string, PosInfo>{});
  ASSERT_TRUE(s.complete());
  const BackendSuite out = serialize_non_reentrant(s);
  EXPECT_NE(out.target, s.target);
  EXPECT_EQ(out.masked_lm, s.masked_lm);
  EXPECT_EQ(out.embedder, s.embedder);
  EXPECT_EQ(out.target->predict(tokenize("x")), s.target->predict(tokenize("x")));
}

}  // namespace
}  // namespace ctxattack
