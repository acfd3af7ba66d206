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

#ifndef CTXATTACK_SEARCH_HPP_
#define CTXATTACK_SEARCH_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxattack/backends.hpp"
#include "ctxattack/candidates.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/errors.hpp"
#include "ctxattack/importance.hpp"
#include "ctxattack/refinement.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

// A probed text together with its prediction and gap against the round base.
struct ProbedSample {
  TokenizedText text;
  Prediction prediction;
  double gap = 0.0;
};

// Top-N single substitutions of one important word, gap descending.
struct WordTops {
  std::size_t word_index = 0;
  std::vector<GapRecord> tops;
};

// Bookkeeping for one attack. `best` is the largest-gap sample seen in the
// current round; it becomes the next base if nothing flips.
struct SearchState {
  TokenizedText base;
  Prediction base_prediction;
  std::size_t round = 0;
  std::vector<std::size_t> selected_words;
  std::vector<WordTops> per_word_tops;
  std::optional<ProbedSample> best;
};

// T_y(base) - T_y(variant), with the base confidence queried at most once.
class ConfidenceGap {
 public:
  ConfidenceGap(CountedTarget& target, TokenizedText base, Label truth,
                std::optional<Prediction> base_prediction = std::nullopt)
      : target_(target), base_(std::move(base)), truth_(std::move(truth)),
        base_prediction_(std::move(base_prediction)) {}

  double base_confidence() {
    if (!base_prediction_) base_prediction_ = target_.predict(base_);
    return base_prediction_->confidence(truth_);
  }

  ProbedSample probe(const TokenizedText& variant) {
    const double base_conf = base_confidence();
    Prediction p = target_.predict(variant);
    const double gap = base_conf - p.confidence(truth_);
    return {variant, std::move(p), gap};
  }

  double operator()(const TokenizedText& variant) { return probe(variant).gap; }

 private:
  CountedTarget& target_;
  TokenizedText base_;
  Label truth_;
  std::optional<Prediction> base_prediction_;
};

inline double confidence_gap(CountedTarget& target, const TokenizedText& base,
                             const TokenizedText& variant, const Label& truth) {
  return ConfidenceGap(target, base, truth)(variant);
}

struct ProbeOutcome {
  std::optional<ProbedSample> flipped;  // first candidate that changed the label
  std::vector<GapRecord> tops;          // at most N positive gaps, descending
  std::optional<ProbedSample> best;     // largest gap among probed candidates
};

// Substitutes each purified candidate alone into the base (one query each).
// Stops at the first label flip; otherwise keeps the N largest positive gaps,
// ties to the earlier candidate.
inline ProbeOutcome probe_candidates(ConfidenceGap& gaps, const TokenizedText& base,
                                     std::size_t word_index,
                                     const std::vector<ScoredCandidate>& purified,
                                     const Label& truth, std::size_t top_n) {
  ProbeOutcome out;
  std::vector<GapRecord> positive;
  for (const ScoredCandidate& c : purified) {
    ProbedSample s = gaps.probe(base.with_cased_word(word_index, c.surface()));
    if (s.prediction.predicted() != truth) {
      out.flipped = std::move(s);
      return out;
    }
    if (s.gap > 0.0) {
      positive.push_back({{{word_index, c.surface()}}, s.gap});
    }
    if (!out.best || s.gap > out.best->gap) out.best = std::move(s);
  }
  std::stable_sort(positive.begin(), positive.end(),
                   [](const GapRecord& a, const GapRecord& b) { return a.gap > b.gap; });
  if (positive.size() > top_n) positive.resize(top_n);
  out.tops = std::move(positive);
  return out;
}

// One full assignment: a substitution for every contributing word.
struct Assignment {
  std::vector<std::pair<std::size_t, std::string>> picks;  // (word index, surface)
  double gap_sum = 0.0;
};

// Cartesian product over the non-empty lists, highest summed single-word gap
// first; ties keep odometer order (first list varies slowest).
inline std::vector<Assignment> enumerate_products(const std::vector<WordTops>& lists) {
  std::vector<const WordTops*> active;
  for (const WordTops& w : lists) {
    if (!w.tops.empty()) active.push_back(&w);
  }
  if (active.empty()) throw EmptySearchSpace();

  std::vector<Assignment> out;
  std::vector<std::size_t> odometer(active.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const GapRecord& rec = active[k]->tops[odometer[k]];
      a.picks.emplace_back(active[k]->word_index, rec.candidate_assignment.begin()->second);
      a.gap_sum += rec.gap;
    }
    out.push_back(std::move(a));
    std::size_t k = active.size();
    while (k > 0) {
      --k;
      if (++odometer[k] < active[k]->tops.size()) break;
      odometer[k] = 0;
      if (k == 0) {
        k = active.size();  // wrapped: done
        break;
      }
    }
    if (k == active.size()) break;
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Assignment& a, const Assignment& b) { return a.gap_sum > b.gap_sum; });
  return out;
}

inline TokenizedText apply_assignment(const TokenizedText& base, const Assignment& a) {
  TokenizedText out = base;
  for (const auto& [index, surface] : a.picks) out = out.with_cased_word(index, surface);
  return out;
}

namespace search_detail {

inline void keep_best(std::optional<ProbedSample>& best, const std::optional<ProbedSample>& s) {
  if (s && (!best || s->gap > best->gap)) best = s;
}

}  // namespace search_detail

// Runs the full attack on one sample.
//
// Each round ranks the base text's words by importance, then walks the whole
// ranking: candidates are generated, refined and probed one substitution at a
// time, returning on the first label flip. The first M words that produced a
// positive gap are then substituted simultaneously over the product of their
// top-N lists. If nothing flips, the largest-gap sample of the round becomes
// the next base. Rounds stop at max_rounds, when a round makes no progress,
// or when the query budget runs out.
//
// Substitutions, perturbation % and similarity are all reported against the
// input sample. Backend failures end the attack with status `errored`.
inline AttackResult attack(const TokenizedText& sample, const Label& truth, const AttackConfig& cfg,
                           const BackendSuite& backends) {
  cfg.validate();
  CountedTarget target(*backends.target, cfg.query_budget);
  AttackResult result;
  result.adversarial = sample;

  SearchState st;
  st.base = sample;
  auto finish = [&](AttackStatus status, const TokenizedText& adversarial) {
    result.status = status;
    result.adversarial = adversarial;
    result.substitutions = diff_substitutions(sample, adversarial);
    result.perturbation_pct = perturbation_percentage(sample, result.substitutions);
    result.queries = target.count();
    result.rounds = st.round;
    if (result.substitutions.empty()) {
      result.semantic_similarity = 1.0;
    } else {
      result.semantic_similarity =
          cosine_similarity(backends.embedder->embed(sample.detokenize()),
                            backends.embedder->embed(adversarial.detokenize()));
    }
    return result;
  };

  try {
    st.base_prediction = target.predict(sample);
    if (st.base_prediction.predicted() != truth) {
      return finish(AttackStatus::skipped_misclassified, sample);
    }

    std::optional<std::vector<ImportanceRecord>> cached_ranking;
    for (st.round = 1; st.round <= cfg.max_rounds; ++st.round) {
      std::vector<ImportanceRecord> ranking;
      if (cfg.reuse_ranking && cached_ranking) {
        ranking = *cached_ranking;
      } else {
        ranking = rank_word_importance(st.base, truth, target, st.base_prediction,
                                       cfg.exclude_stopwords);
        cached_ranking = ranking;
      }

      ConfidenceGap gaps(target, st.base, truth, st.base_prediction);
      st.selected_words.clear();
      st.per_word_tops.clear();
      st.best.reset();

      for (const ImportanceRecord& rec : ranking) {
        const std::size_t i = rec.word_index;
        const auto sc = generate_candidates(st.base, i, cfg, *backends.masked_lm);
        if (sc.empty()) continue;
        const Refinement refined = refine(st.base, i, sc, cfg, backends, &sample);
        if (refined.purified.empty()) continue;

        ProbeOutcome probe = probe_candidates(gaps, st.base, i, refined.purified, truth, cfg.N);
        if (probe.flipped) {
          result.found_by = FoundBy::single;
          return finish(AttackStatus::success, probe.flipped->text);
        }
        search_detail::keep_best(st.best, probe.best);
        if (!probe.tops.empty() && st.selected_words.size() < cfg.M) {
          st.selected_words.push_back(i);
          st.per_word_tops.push_back({i, std::move(probe.tops)});
        }
      }

      // With one contributing word every assignment was already probed.
      if (st.per_word_tops.size() >= 2) {
        for (const Assignment& a : enumerate_products(st.per_word_tops)) {
          ProbedSample s = gaps.probe(apply_assignment(st.base, a));
          if (s.prediction.predicted() != truth) {
            result.found_by = FoundBy::product;
            return finish(AttackStatus::success, s.text);
          }
          std::optional<ProbedSample> opt(std::move(s));
          search_detail::keep_best(st.best, opt);
        }
      }

      if (!st.best || st.best->gap <= 0.0) break;
      st.base = st.best->text;
      st.base_prediction = st.best->prediction;
    }
    st.round = std::min(st.round, cfg.max_rounds);
    return finish(AttackStatus::failed, st.base);
  } catch (const BudgetExhausted&) {
    st.round = std::min(st.round, cfg.max_rounds);
    // The base only ever moves to a larger-gap sample, so the round's best
    // probe is at least as good as it.
    const TokenizedText& best =
        st.best && st.best->gap > 0.0 ? st.best->text : st.base;
    return finish(AttackStatus::budget_exhausted, best);
  } catch (const BackendError& e) {
    result.error = e.what();
    result.status = AttackStatus::errored;
    result.queries = target.count();
    result.rounds = st.round;
    return result;
  }
}

}  // namespace ctxattack

#endif  // CTXATTACK_SEARCH_HPP_
