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

#ifndef CTXATTACK_STUB_BACKENDS_HPP_
#define CTXATTACK_STUB_BACKENDS_HPP_

// Small deterministic backends whose every output can be checked by hand.
// They are the reference suite for tests and for dry runs of the harness.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxattack/backends.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

// Linear keyword classifier. Class c gets prior[c] plus the sum of weight[w][c]
// over every word w of the text (companion included), clipped below at
// kMinWeight; scores are the clipped values renormalized. The mask symbol
// and unknown words contribute nothing.
class KeywordTarget : public TargetModel {
 public:
  static constexpr double kMinWeight = 1e-9;

  KeywordTarget(std::vector<double> priors, std::map<std::string, std::vector<double>> weights)
      : priors_(std::move(priors)), weights_(std::move(weights)) {
    for (const auto& [word, w] : weights_) {
      if (w.size() != priors_.size()) {
        throw Error("keyword '" + word + "' has the wrong number of class weights");
      }
    }
  }

  // Two classes (0 = negative, 1 = positive). A polarity of +w moves w of
  // mass from class 0 to class 1.
  static KeywordTarget binary(double positive_prior, const std::map<std::string, double>& polarity) {
    std::map<std::string, std::vector<double>> weights;
    for (const auto& [word, w] : polarity) weights[to_lower(word)] = {-w, w};
    return KeywordTarget({1.0 - positive_prior, positive_prior}, std::move(weights));
  }

  Prediction predict(const TokenizedText& text) override {
    std::vector<double> raw = priors_;
    auto add = [&](std::string_view word) {
      auto it = weights_.find(to_lower(word));
      if (it == weights_.end()) return;
      for (std::size_t c = 0; c < raw.size(); ++c) raw[c] += it->second[c];
    };
    for (const Token& t : text.tokens()) add(t.text);
    if (text.companion()) {
      const TokenizedText companion = tokenize(text.companion()->text);
      for (const Token& t : companion.tokens()) add(t.text);
    }
    for (double& r : raw) r = std::max(r, kMinWeight);
    return Prediction::from_weights(raw);
  }

  bool reentrant() const override { return true; }

  std::size_t num_classes() const { return priors_.size(); }
  const std::map<std::string, std::vector<double>>& weights() const { return weights_; }
  const std::vector<double>& priors() const { return priors_; }

 private:
  std::vector<double> priors_;
  std::map<std::string, std::vector<double>> weights_;
};

class UniformTarget : public TargetModel {
 public:
  explicit UniformTarget(std::size_t num_classes) : num_classes_(num_classes) {}
  Prediction predict(const TokenizedText&) override {
    return Prediction::from_weights(std::vector<double>(num_classes_, 1.0));
  }
  bool reentrant() const override { return true; }

 private:
  std::size_t num_classes_;
};

// Lookup-table masked LM keyed by the (lowercased) word being masked. A
// window probe first tries the key "word|neighbour" so tests can give each
// window position its own list, then falls back to "word".
class TableMaskedLM : public MaskedLMProvider {
 public:
  explicit TableMaskedLM(std::map<std::string, std::vector<std::string>> table)
      : table_(std::move(table)) {}

  std::vector<std::string> top_k(const TokenizedText& text, std::size_t mask_index,
                                 std::size_t k) override {
    return lookup(to_lower(text.word(mask_index)), k);
  }

  std::vector<std::string> probe(const TokenizedText& text, std::size_t target_index,
                                 std::size_t neighbor_index, std::size_t k) override {
    std::string key = to_lower(text.word(target_index)) + "|" + to_lower(text.word(neighbor_index));
    if (table_.count(key) != 0) return lookup(key, k);
    return top_k(text, target_index, k);
  }

  bool reentrant() const override { return true; }

 private:
  std::vector<std::string> lookup(const std::string& key, std::size_t k) const {
    std::vector<std::string> out;
    auto it = table_.find(key);
    if (it == table_.end()) return out;
    std::set<std::string> seen;
    for (const std::string& w : it->second) {
      if (out.size() >= k) break;
      if (!is_alphabetic_word(w) || !seen.insert(w).second) continue;
      out.push_back(w);
    }
    return out;
  }

  std::map<std::string, std::vector<std::string>> table_;
};

// Bag-of-words embedder: the sum of per-word vectors over the non-punctuation
// words of the text. Words without an explicit vector get a one-hot vector
// at a hashed coordinate.
class BagOfWordsEmbedder : public SentenceEmbedder {
 public:
  static constexpr std::size_t kDefaultDimension = 512;

  explicit BagOfWordsEmbedder(std::size_t dimension = kDefaultDimension,
                              std::map<std::string, std::vector<double>> vectors = {})
      : dimension_(dimension), vectors_(std::move(vectors)) {
    for (const auto& [word, v] : vectors_) {
      if (v.size() != dimension_) throw Error("vector for '" + word + "' has the wrong dimension");
    }
  }

  std::vector<double> embed(std::string_view text) override {
    std::vector<double> out(dimension_, 0.0);
    if (normalize_whitespace(text).empty()) return out;
    const TokenizedText tokens = tokenize(text);
    for (const Token& t : tokens.tokens()) {
      if (is_punctuation_token(t.text)) continue;
      std::string key = to_lower(t.text);
      auto it = vectors_.find(key);
      if (it != vectors_.end()) {
        for (std::size_t d = 0; d < dimension_; ++d) out[d] += it->second[d];
      } else {
        out[fnv1a(key) % dimension_] += 1.0;
      }
    }
    return out;
  }

  std::size_t dimension() const override { return dimension_; }
  bool reentrant() const override { return true; }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    return h;
  }

 private:
  std::size_t dimension_;
  std::map<std::string, std::vector<double>> vectors_;
};

// Bigram fluency table. Position 0 reads the unigram table; every other
// position reads bigram (previous word, word). Missing entries get kFloor.
class BigramFluency : public FluencyScorer {
 public:
  static constexpr double kFloor = 1e-8;

  BigramFluency(std::map<std::string, double> unigram,
                std::map<std::pair<std::string, std::string>, double> bigram)
      : unigram_(std::move(unigram)), bigram_(std::move(bigram)) {}

  double word_probability(const TokenizedText& text, std::size_t word_index,
                          std::string_view word) override {
    std::string w = to_lower(word);
    if (word_index == 0) {
      auto it = unigram_.find(w);
      return it == unigram_.end() ? kFloor : it->second;
    }
    auto it = bigram_.find({to_lower(text.word(word_index - 1)), w});
    return it == bigram_.end() ? kFloor : it->second;
  }

  bool reentrant() const override { return true; }

 private:
  std::map<std::string, double> unigram_;
  std::map<std::pair<std::string, std::string>, double> bigram_;
};

// Dictionary tagger; context is ignored. Words missing from the lexicon are
// tagged punct, num or other by their characters.
class LexiconPosTagger : public PosTagger {
 public:
  explicit LexiconPosTagger(std::map<std::string, PosInfo> lexicon,
                            std::map<std::string, std::string> irregular_plurals = {})
      : lexicon_(std::move(lexicon)) {
    for (const auto& [singular, plural] : irregular_plurals) {
      to_plural_[to_lower(singular)] = to_lower(plural);
      to_singular_[to_lower(plural)] = to_lower(singular);
    }
  }

  PosInfo tag_in_context(const TokenizedText& text, std::size_t word_index) override {
    const std::string& w = text.word(word_index);
    auto it = lexicon_.find(to_lower(w));
    if (it != lexicon_.end()) return it->second;
    if (is_punctuation_token(w)) return {PosTag::punct, GrammaticalNumber::none, ""};
    if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' || c == ',';
        })) {
      return {PosTag::num, GrammaticalNumber::none, ""};
    }
    return {PosTag::other, GrammaticalNumber::none, ""};
  }

  std::string inflect_number(std::string_view noun, GrammaticalNumber target) override {
    const auto& table = target == GrammaticalNumber::plural ? to_plural_ : to_singular_;
    auto it = table.find(to_lower(noun));
    if (it != table.end()) return it->second;
    return inflect_english_number(noun, target);
  }

  bool reentrant() const override { return true; }

 private:
  std::map<std::string, PosInfo> lexicon_;
  std::map<std::string, std::string> to_plural_;
  std::map<std::string, std::string> to_singular_;
};

inline PosInfo noun(GrammaticalNumber number) { return {PosTag::noun, number, ""}; }
inline PosInfo verb(std::string lemma) { return {PosTag::verb, GrammaticalNumber::none, std::move(lemma)}; }
inline PosInfo tagged(PosTag tag) { return {tag, GrammaticalNumber::none, ""}; }

}  // namespace ctxattack

#endif  // CTXATTACK_STUB_BACKENDS_HPP_
