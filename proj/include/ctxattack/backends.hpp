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

#ifndef CTXATTACK_BACKENDS_HPP_
#define CTXATTACK_BACKENDS_HPP_

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxattack/core_types.hpp"
#include "ctxattack/errors.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

// Universal part-of-speech tagset.
enum class PosTag { noun, verb, adj, adv, pron, det, adp, conj, num, prt, punct, other };

enum class GrammaticalNumber { none, singular, plural };

struct PosInfo {
  PosTag tag = PosTag::other;
  GrammaticalNumber number = GrammaticalNumber::none;  // nouns only
  std::string lemma;                                   // verbs only
  bool operator==(const PosInfo&) const = default;
};

// The classifier under attack. Every call to predict() is one query.
class TargetModel {
 public:
  virtual ~TargetModel() = default;
  virtual Prediction predict(const TokenizedText& text) = 0;
  // Whether predict() may be called from several threads at once.
  virtual bool reentrant() const { return false; }
};

class MaskedLMProvider {
 public:
  virtual ~MaskedLMProvider() = default;

  // Up to k distinct fills for the word at mask_index, most probable first.
  virtual std::vector<std::string> top_k(const TokenizedText& text, std::size_t mask_index,
                                         std::size_t k) = 0;

  // One window probe: fills for target_index as seen from neighbor_index.
  // The default masks the target word and ignores the neighbour; backends
  // that condition on the neighbour (or mask it instead) override this.
  virtual std::vector<std::string> probe(const TokenizedText& text, std::size_t target_index,
                                         std::size_t /*neighbor_index*/, std::size_t k) {
    return top_k(text, target_index, k);
  }

  virtual bool reentrant() const { return false; }
};

class SentenceEmbedder {
 public:
  virtual ~SentenceEmbedder() = default;
  virtual std::vector<double> embed(std::string_view text) = 0;
  virtual std::size_t dimension() const = 0;
  virtual bool reentrant() const { return false; }
};

// Causal language model: probability of `word` at word_index given only the
// words before it.
class FluencyScorer {
 public:
  virtual ~FluencyScorer() = default;
  virtual double word_probability(const TokenizedText& text, std::size_t word_index,
                                  std::string_view word) = 0;
  virtual bool reentrant() const { return false; }
};

// English noun number inflection, good enough for regular nouns.
inline std::string inflect_english_number(std::string_view noun, GrammaticalNumber target) {
  std::string w(noun);
  auto ends_with = [&](std::string_view suffix) {
    return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  auto is_vowel = [](char c) {
    return std::string_view("aeiouAEIOU").find(c) != std::string_view::npos;
  };
  if (target == GrammaticalNumber::plural) {
    if (ends_with("s") || ends_with("x") || ends_with("z") || ends_with("ch") || ends_with("sh")) {
      return w + "es";
    }
    if (w.size() >= 2 && ends_with("y") && !is_vowel(w[w.size() - 2])) {
      return w.substr(0, w.size() - 1) + "ies";
    }
    return w + "s";
  }
  if (target == GrammaticalNumber::singular) {
    if (w.size() > 3 && ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
    if (ends_with("ses") || ends_with("xes") || ends_with("zes") || ends_with("ches") ||
        ends_with("shes")) {
      return w.substr(0, w.size() - 2);
    }
    if (w.size() > 1 && ends_with("s") && !ends_with("ss")) return w.substr(0, w.size() - 1);
  }
  return w;
}

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual PosInfo tag_in_context(const TokenizedText& text, std::size_t word_index) = 0;
  virtual std::string inflect_number(std::string_view noun, GrammaticalNumber target) {
    return inflect_english_number(noun, target);
  }
  virtual bool reentrant() const { return false; }
};

struct BackendSuite {
  std::shared_ptr<TargetModel> target;
  std::shared_ptr<MaskedLMProvider> masked_lm;
  std::shared_ptr<SentenceEmbedder> embedder;
  std::shared_ptr<FluencyScorer> fluency;
  std::shared_ptr<PosTagger> pos_tagger;

  bool complete() const { return target && masked_lm && embedder && fluency && pos_tagger; }
};

// Per-attack query accounting. Each predict() is counted before it is
// forwarded; when a budget is set, the call that would exceed it throws
// BudgetExhausted without reaching the target.
class CountedTarget {
 public:
  explicit CountedTarget(TargetModel& target, std::optional<std::size_t> budget = std::nullopt)
      : target_(target), budget_(budget) {}

  Prediction predict(const TokenizedText& text) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (budget_ && count_ >= *budget_) throw BudgetExhausted(*budget_);
      ++count_;
    }
    return target_.predict(text);
  }

  std::size_t count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return count_;
  }

  std::optional<std::size_t> budget() const { return budget_; }

 private:
  TargetModel& target_;
  std::optional<std::size_t> budget_;
  mutable std::mutex mu_;
  std::size_t count_ = 0;
};

namespace backend_detail {

class SerializedTarget : public TargetModel {
 public:
  explicit SerializedTarget(std::shared_ptr<TargetModel> inner) : inner_(std::move(inner)) {}
  Prediction predict(const TokenizedText& text) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->predict(text);
  }
  bool reentrant() const override { return true; }

 private:
  std::shared_ptr<TargetModel> inner_;
  std::mutex mu_;
};

class SerializedMaskedLM : public MaskedLMProvider {
 public:
  explicit SerializedMaskedLM(std::shared_ptr<MaskedLMProvider> inner) : inner_(std::move(inner)) {}
  std::vector<std::string> top_k(const TokenizedText& text, std::size_t mask_index,
                                 std::size_t k) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->top_k(text, mask_index, k);
  }
  std::vector<std::string> probe(const TokenizedText& text, std::size_t target_index,
                                 std::size_t neighbor_index, std::size_t k) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->probe(text, target_index, neighbor_index, k);
  }
  bool reentrant() const override { return true; }

 private:
  std::shared_ptr<MaskedLMProvider> inner_;
  std::mutex mu_;
};

class SerializedEmbedder : public SentenceEmbedder {
 public:
  explicit SerializedEmbedder(std::shared_ptr<SentenceEmbedder> inner) : inner_(std::move(inner)) {}
  std::vector<double> embed(std::string_view text) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->embed(text);
  }
  std::size_t dimension() const override { return inner_->dimension(); }
  bool reentrant() const override { return true; }

 private:
  std::shared_ptr<SentenceEmbedder> inner_;
  std::mutex mu_;
};

class SerializedFluency : public FluencyScorer {
 public:
  explicit SerializedFluency(std::shared_ptr<FluencyScorer> inner) : inner_(std::move(inner)) {}
  double word_probability(const TokenizedText& text, std::size_t word_index,
                          std::string_view word) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->word_probability(text, word_index, word);
  }
  bool reentrant() const override { return true; }

 private:
  std::shared_ptr<FluencyScorer> inner_;
  std::mutex mu_;
};

class SerializedTagger : public PosTagger {
 public:
  explicit SerializedTagger(std::shared_ptr<PosTagger> inner) : inner_(std::move(inner)) {}
  PosInfo tag_in_context(const TokenizedText& text, std::size_t word_index) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->tag_in_context(text, word_index);
  }
  std::string inflect_number(std::string_view noun, GrammaticalNumber target) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_->inflect_number(noun, target);
  }
  bool reentrant() const override { return true; }

 private:
  std::shared_ptr<PosTagger> inner_;
  std::mutex mu_;
};

}  // namespace backend_detail

// Wraps every non-reentrant member behind a mutex so the suite can be shared
// by concurrent attack workers.
inline BackendSuite serialize_non_reentrant(const BackendSuite& suite) {
  using namespace backend_detail;
  BackendSuite out = suite;
  if (!suite.target->reentrant()) out.target = std::make_shared<SerializedTarget>(suite.target);
  if (!suite.masked_lm->reentrant()) {
    out.masked_lm = std::make_shared<SerializedMaskedLM>(suite.masked_lm);
  }
  if (!suite.embedder->reentrant()) {
    out.embedder = std::make_shared<SerializedEmbedder>(suite.embedder);
  }
  if (!suite.fluency->reentrant()) out.fluency = std::make_shared<SerializedFluency>(suite.fluency);
  if (!suite.pos_tagger->reentrant()) {
    out.pos_tagger = std::make_shared<SerializedTagger>(suite.pos_tagger);
  }
  return out;
}

}  // namespace ctxattack

#endif  // CTXATTACK_BACKENDS_HPP_
