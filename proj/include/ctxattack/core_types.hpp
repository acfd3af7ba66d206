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

#ifndef CTXATTACK_CORE_TYPES_HPP_
#define CTXATTACK_CORE_TYPES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxattack/errors.hpp"
#include "ctxattack/text.hpp"

namespace ctxattack {

struct Label {
  std::size_t id = 0;
  std::optional<std::string> name;

  bool operator==(const Label& other) const { return id == other.id; }
};

// Per-class confidences from one target query. `predicted` is the argmax,
// ties going to the lowest class index.
class Prediction {
 public:
  static constexpr double kSumTolerance = 1e-6;

  Prediction() = default;

  // Throws ProtocolError unless every score is in [0, 1] and they sum to 1.
  static Prediction from_scores(std::vector<double> scores) {
    if (scores.empty()) throw ProtocolError("prediction has no scores");
    double sum = 0.0;
    for (double s : scores) {
      if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
        throw ProtocolError("score outside [0, 1]: " + std::to_string(s));
      }
      sum += s;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw ProtocolError("scores sum to " + std::to_string(sum) + ", not 1");
    }
    Prediction p;
    p.predicted_.id = argmax(scores);
    p.scores_ = std::move(scores);
    return p;
  }

  // Rescales non-negative weights to a distribution first.
  static Prediction from_weights(const std::vector<double>& weights) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (!(sum > 0.0)) throw ProtocolError("weights do not have a positive sum");
    std::vector<double> scores;
    scores.reserve(weights.size());
    for (double w : weights) scores.push_back(w / sum);
    return from_scores(std::move(scores));
  }

  static std::size_t argmax(const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
      if (scores[i] > scores[best]) best = i;
    }
    return best;
  }

  const std::vector<double>& scores() const { return scores_; }
  const Label& predicted() const { return predicted_; }
  std::size_t num_classes() const { return scores_.size(); }

  double confidence(const Label& label) const {
    if (label.id >= scores_.size()) {
      throw Error("label " + std::to_string(label.id) + " is outside the target's " +
                  std::to_string(scores_.size()) + " classes");
    }
    return scores_[label.id];
  }

  bool operator==(const Prediction& other) const {
    return scores_ == other.scores_ && predicted_ == other.predicted_;
  }

 private:
  std::vector<double> scores_;
  Label predicted_;
};

struct ImportanceRecord {
  std::size_t word_index = 0;
  double delta = 0.0;  // p_full(Y) - p_masked(Y)
};

enum class ThresholdHeuristic { average, median, top_n, top_maxes_distance, constant };

inline std::string_view to_string(ThresholdHeuristic h) {
  switch (h) {
    case ThresholdHeuristic::average: return "average";
    case ThresholdHeuristic::median: return "median";
    case ThresholdHeuristic::top_n: return "top_n";
    case ThresholdHeuristic::top_maxes_distance: return "top_maxes_distance";
    case ThresholdHeuristic::constant: return "constant";
  }
  return "?";
}

inline ThresholdHeuristic parse_heuristic(std::string_view name) {
  for (auto h : {ThresholdHeuristic::average, ThresholdHeuristic::median,
                 ThresholdHeuristic::top_n, ThresholdHeuristic::top_maxes_distance,
                 ThresholdHeuristic::constant}) {
    if (to_string(h) == name) return h;
  }
  throw ConfigError("unknown threshold heuristic '" + std::string(name) + "'");
}

// Every attack hyperparameter. Defaults are the recommended settings.
struct AttackConfig {
  std::size_t K = 60;            // masked-LM candidates per probe
  std::size_t window_half = 2;   // neighbours probed on each side
  std::size_t M = 3;             // important words combined per round
  std::size_t N = 4;             // refined substitutions kept per word
  double lambda = 1.0;
  std::size_t topn_rank = 3;     // rank used by top_n and top_maxes_distance
  ThresholdHeuristic heuristic = ThresholdHeuristic::top_maxes_distance;
  double semantic_floor = 0.7;
  double syntactic_floor = 0.0;
  std::size_t max_rounds = 4;
  std::optional<std::size_t> query_budget;
  // Rank importance once on the input instead of on every round's base text.
  bool reuse_ranking = false;
  bool exclude_stopwords = false;
  // 0 scores similarity on the whole text; otherwise on +-semantic_window
  // words around the substituted position.
  std::size_t semantic_window = 0;

  void validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
      throw ConfigError("invalid " + key + ": " + why);
    };
    if (K < 1) fail("K", "must be >= 1");
    if (window_half < 1) fail("window_half", "must be >= 1");
    if (M < 1 || M > 4) fail("M", "must be in [1, 4]");
    if (N < 1 || N > 4) fail("N", "must be in [1, 4]");
    if (topn_rank < 1) fail("topn_rank", "must be >= 1");
    if (!std::isfinite(lambda)) fail("lambda", "must be finite");
    if (max_rounds < 1) fail("max_rounds", "must be >= 1");
    if (query_budget && *query_budget < 1) fail("query_budget", "must be >= 1");
  }

  bool operator==(const AttackConfig&) const = default;
};

enum class PosVerdict { accept, inflected, reject };

struct ScoredCandidate {
  std::string text;
  double semantic = 0.0;
  double syntactic = 0.0;
  PosVerdict pos_verdict = PosVerdict::accept;
  std::optional<std::string> inflected_form;  // set iff pos_verdict == inflected

  // The form actually substituted into the text.
  const std::string& surface() const { return inflected_form ? *inflected_form : text; }
};

// A (partial) assignment of substitutions and the confidence gap it causes:
// T_y(base) - T_y(base with the assignment applied).
struct GapRecord {
  std::map<std::size_t, std::string> candidate_assignment;
  double gap = 0.0;
};

enum class AttackStatus { success, failed, skipped_misclassified, budget_exhausted, errored };

inline std::string_view to_string(AttackStatus s) {
  switch (s) {
    case AttackStatus::success: return "success";
    case AttackStatus::failed: return "failed";
    case AttackStatus::skipped_misclassified: return "skipped_misclassified";
    case AttackStatus::budget_exhausted: return "budget_exhausted";
    case AttackStatus::errored: return "errored";
  }
  return "?";
}

inline AttackStatus parse_status(std::string_view name) {
  for (auto s : {AttackStatus::success, AttackStatus::failed,
                 AttackStatus::skipped_misclassified, AttackStatus::budget_exhausted,
                 AttackStatus::errored}) {
    if (to_string(s) == name) return s;
  }
  throw Error("unknown attack status '" + std::string(name) + "'");
}

// Which stage produced a successful adversarial text.
enum class FoundBy { none, single, product };

inline std::string_view to_string(FoundBy f) {
  switch (f) {
    case FoundBy::none: return "none";
    case FoundBy::single: return "single";
    case FoundBy::product: return "product";
  }
  return "?";
}

inline FoundBy parse_found_by(std::string_view name) {
  for (FoundBy f : {FoundBy::none, FoundBy::single, FoundBy::product}) {
    if (to_string(f) == name) return f;
  }
  throw Error("unknown found_by '" + std::string(name) + "'");
}

struct Substitution {
  std::size_t index = 0;
  std::string original;
  std::string replacement;
  bool operator==(const Substitution&) const = default;
};

struct AttackResult {
  AttackStatus status = AttackStatus::failed;
  TokenizedText adversarial;
  std::vector<Substitution> substitutions;  // against the input, not the last base
  std::size_t queries = 0;
  double semantic_similarity = 0.0;
  double perturbation_pct = 0.0;
  std::size_t rounds = 0;
  FoundBy found_by = FoundBy::none;
  std::string error;  // set when status == errored
};

// 100 * distinct substituted positions / word count.
inline double perturbation_percentage(const TokenizedText& original,
                                      const std::vector<Substitution>& substitutions) {
  std::set<std::size_t> distinct;
  for (const Substitution& s : substitutions) {
    if (s.index >= original.size()) {
      throw Error("substitution index " + std::to_string(s.index) + " out of range");
    }
    distinct.insert(s.index);
  }
  const std::size_t words = original.word_count();
  if (words == 0) return 0.0;
  return 100.0 * static_cast<double>(distinct.size()) / static_cast<double>(words);
}

// Positions where `adversarial` differs from `original`.
inline std::vector<Substitution> diff_substitutions(const TokenizedText& original,
                                                    const TokenizedText& adversarial) {
  std::vector<Substitution> out;
  for (std::size_t i = 0; i < original.size() && i < adversarial.size(); ++i) {
    if (original.word(i) != adversarial.word(i)) {
      out.push_back({i, original.word(i), adversarial.word(i)});
    }
  }
  return out;
}

}  // namespace ctxattack

#endif  // CTXATTACK_CORE_TYPES_HPP_
