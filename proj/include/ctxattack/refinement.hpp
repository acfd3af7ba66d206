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

#ifndef CTXATTACK_REFINEMENT_HPP_
#define CTXATTACK_REFINEMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ctxattack/backends.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/errors.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("embedding dimensions differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

// The text an embedder sees: the whole attacked field, or only the words
// within +-window of `center` when window > 0.
inline std::string embedding_view(const TokenizedText& text, std::size_t center, std::size_t window) {
  if (window == 0) return text.detokenize();
  const std::size_t lo = center >= window ? center - window : 0;
  const std::size_t hi = std::min(text.size() - 1, center + window);
  std::string out;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (i > lo && text.tokens()[i].space_before) out.push_back(' ');
    out += text.word(i);
  }
  return out;
}

// Cosine between the embeddings of `reference` and of `base` with the
// candidate substituted at word_index. When reference is base this is the
// plain "original vs. original-with-candidate" similarity.
inline double semantic_score(const TokenizedText& reference, const TokenizedText& base,
                             std::size_t word_index, std::string_view candidate,
                             SentenceEmbedder& embedder, std::size_t window = 0) {
  const auto ref = embedder.embed(embedding_view(reference, word_index, window));
  const auto sub = embedder.embed(
      embedding_view(base.with_cased_word(word_index, candidate), word_index, window));
  return cosine_similarity(ref, sub);
}

inline double semantic_score(const TokenizedText& original, std::size_t word_index,
                             std::string_view candidate, SentenceEmbedder& embedder,
                             std::size_t window = 0) {
  return semantic_score(original, original, word_index, candidate, embedder, window);
}

// P(candidate) - P(original word), both at word_index under the same left
// context.
inline double syntactic_score(const TokenizedText& original, std::size_t word_index,
                              std::string_view candidate, FluencyScorer& fluency) {
  const std::string cased = apply_case(candidate, original.original_case(word_index));
  return fluency.word_probability(original, word_index, cased) -
         fluency.word_probability(original, word_index, original.word(word_index));
}

// Threshold over one word's candidate scores. `constant` yields -inf so only
// the static floors act.
inline double dynamic_threshold(std::span<const double> scores, ThresholdHeuristic heuristic,
                                double lambda, std::size_t topn_rank) {
  if (scores.empty()) throw EmptyScores();
  if (topn_rank < 1) throw ConfigError("invalid topn_rank: must be >= 1");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double s_n = sorted[std::min(topn_rank, sorted.size()) - 1];
  switch (heuristic) {
    case ThresholdHeuristic::average:
      return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    case ThresholdHeuristic::median: {
      const std::size_t n = sorted.size();
      return n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    }
    case ThresholdHeuristic::top_n:
      return s_n;
    case ThresholdHeuristic::top_maxes_distance:
      return s_n - lambda * (sorted.front() - s_n);
    case ThresholdHeuristic::constant:
      break;
  }
  return -std::numeric_limits<double>::infinity();
}

struct ThresholdOutcome {
  ThresholdHeuristic heuristic = ThresholdHeuristic::constant;
  double dt_semantic = 0.0;
  double dt_syntactic = 0.0;
  double effective_semantic = 0.0;
  double effective_syntactic = 0.0;
};

struct PosCheck {
  PosVerdict verdict = PosVerdict::reject;
  std::optional<std::string> inflected_form;
};

// Tags the candidate where it would sit in the text and compares with the
// original word's tag. Nouns differing only in number are re-inflected;
// verbs sharing the original's lemma are rejected, as is any tag mismatch.
inline PosCheck pos_compatible(const TokenizedText& original, std::size_t word_index,
                               std::string_view candidate, PosTagger& tagger) {
  const PosInfo want = tagger.tag_in_context(original, word_index);
  const PosInfo got =
      tagger.tag_in_context(original.with_cased_word(word_index, candidate), word_index);
  if (want.tag != got.tag) return {PosVerdict::reject, std::nullopt};
  if (want.tag == PosTag::verb && !want.lemma.empty() && iequals(want.lemma, got.lemma)) {
    return {PosVerdict::reject, std::nullopt};
  }
  if (want.tag == PosTag::noun && want.number != GrammaticalNumber::none &&
      got.number != GrammaticalNumber::none && want.number != got.number) {
    return {PosVerdict::inflected, tagger.inflect_number(candidate, want.number)};
  }
  return {PosVerdict::accept, std::nullopt};
}

struct Refinement {
  std::vector<ScoredCandidate> scored;    // every candidate, input order
  std::vector<ScoredCandidate> purified;  // survivors, semantic score descending
  ThresholdOutcome thresholds;
};

// Scores every candidate, derives this word's thresholds from its own score
// lists, and keeps candidates at or above both effective thresholds whose POS
// is compatible. Inflected forms replace the raw candidate.
//
// `reference` is the text semantic similarity is measured against; it
// defaults to `base`.
inline Refinement refine(const TokenizedText& base, std::size_t word_index,
                         const std::vector<std::string>& candidates, const AttackConfig& cfg,
                         const BackendSuite& backends, const TokenizedText* reference = nullptr) {
  Refinement out;
  out.thresholds.heuristic = cfg.heuristic;
  if (candidates.empty()) {
    out.thresholds.dt_semantic = out.thresholds.dt_syntactic =
        -std::numeric_limits<double>::infinity();
    out.thresholds.effective_semantic = cfg.semantic_floor;
    out.thresholds.effective_syntactic = cfg.syntactic_floor;
    return out;
  }
  const TokenizedText& ref = reference ? *reference : base;
  const auto ref_embedding =
      backends.embedder->embed(embedding_view(ref, word_index, cfg.semantic_window));

  std::vector<double> sem, syn;
  for (const std::string& c : candidates) {
    ScoredCandidate sc;
    sc.text = c;
    const auto emb = backends.embedder->embed(
        embedding_view(base.with_cased_word(word_index, c), word_index, cfg.semantic_window));
    sc.semantic = cosine_similarity(ref_embedding, emb);
    sc.syntactic = syntactic_score(base, word_index, c, *backends.fluency);
    sem.push_back(sc.semantic);
    syn.push_back(sc.syntactic);
    out.scored.push_back(std::move(sc));
  }

  ThresholdOutcome& t = out.thresholds;
  t.dt_semantic = dynamic_threshold(sem, cfg.heuristic, cfg.lambda, cfg.topn_rank);
  t.dt_syntactic = dynamic_threshold(syn, cfg.heuristic, cfg.lambda, cfg.topn_rank);
  t.effective_semantic = std::max(t.dt_semantic, cfg.semantic_floor);
  t.effective_syntactic = std::max(t.dt_syntactic, cfg.syntactic_floor);

  std::unordered_set<std::string> surfaces{to_lower(base.word(word_index))};
  for (const ScoredCandidate& sc : out.scored) {
    if (sc.semantic < t.effective_semantic || sc.syntactic < t.effective_syntactic) continue;
    PosCheck pos = pos_compatible(base, word_index, sc.text, *backends.pos_tagger);
    if (pos.verdict == PosVerdict::reject) continue;
    ScoredCandidate kept = sc;
    kept.pos_verdict = pos.verdict;
    kept.inflected_form = pos.inflected_form;
    if (!surfaces.insert(to_lower(kept.surface())).second) continue;
    out.purified.push_back(std::move(kept));
  }
  std::stable_sort(out.purified.begin(), out.purified.end(),
                   [](const ScoredCandidate& a, const ScoredCandidate& b) {
                     return a.semantic > b.semantic;
                   });
  return out;
}

}  // namespace ctxattack

#endif  // CTXATTACK_REFINEMENT_HPP_
