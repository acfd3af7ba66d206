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

#ifndef CTXATTACK_TEXT_HPP_
#define CTXATTACK_TEXT_HPP_

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxattack/errors.hpp"

namespace ctxattack {

// Reserved symbol a word is replaced with when probing its importance.
inline constexpr std::string_view kMaskToken = "[MASK-SLOT]";

enum class CaseShape { lower, title, upper, other };

namespace text_detail {

inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline bool is_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

// Bytes >= 0x80 belong to UTF-8 sequences; they are counted as letters.
inline bool is_letter(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalpha(u) != 0;
}

}  // namespace text_detail

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && to_lower(a) == to_lower(b);
}

// Collapses whitespace runs to one space and trims both ends.
inline std::string normalize_whitespace(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    if (text_detail::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

inline bool is_punctuation_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), text_detail::is_punct);
}

// True for a single alphabetic word; internal apostrophes and hyphens are
// allowed ("don't", "well-known"), anything else is not.
inline bool is_alphabetic_word(std::string_view s) {
  if (s.empty() || !text_detail::is_letter(s.front()) ||
      !text_detail::is_letter(s.back())) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return text_detail::is_letter(c) || c == '\'' || c == '-';
  });
}

inline CaseShape case_shape(std::string_view word) {
  std::size_t letters = 0, upper = 0;
  for (char c : word) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalpha(u) == 0) continue;
    ++letters;
    if (std::isupper(u) != 0) ++upper;
  }
  if (letters == 0) return CaseShape::other;
  if (upper == 0) return CaseShape::lower;
  if (upper == letters) return letters == 1 ? CaseShape::title : CaseShape::upper;
  auto first = std::find_if(word.begin(), word.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
  });
  if (upper == 1 && std::isupper(static_cast<unsigned char>(*first)) != 0) {
    return CaseShape::title;
  }
  return CaseShape::other;
}

inline std::string apply_case(std::string_view word, CaseShape shape) {
  switch (shape) {
    case CaseShape::lower:
      return to_lower(word);
    case CaseShape::upper:
      return to_upper(word);
    case CaseShape::title: {
      std::string out = to_lower(word);
      if (!out.empty()) {
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
      }
      return out;
    }
    case CaseShape::other:
      break;
  }
  return std::string(word);
}

struct Token {
  std::string text;
  bool space_before = false;
  bool operator==(const Token&) const = default;
};

// The non-attacked half of a premise/hypothesis pair. It travels with the
// attacked text so the target sees both, but it is never perturbed.
struct Companion {
  std::string text;
  bool before = true;
  bool operator==(const Companion&) const = default;
};

// An ordered word sequence. Values are immutable: every edit returns a copy,
// and the per-word casing recorded at construction is carried along so that
// substitutions can be re-cased to match the word they replace.
class TokenizedText {
 public:
  TokenizedText() = default;

  TokenizedText(std::vector<Token> tokens, std::string original_raw)
      : tokens_(std::move(tokens)), original_raw_(std::move(original_raw)) {
    case_map_.reserve(tokens_.size());
    for (const Token& t : tokens_) case_map_.push_back(case_shape(t.text));
  }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  const std::string& word(std::size_t i) const { return tokens_.at(i).text; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::string& original_raw() const { return original_raw_; }
  CaseShape original_case(std::size_t i) const { return case_map_.at(i); }
  const std::optional<Companion>& companion() const { return companion_; }

  std::vector<std::string> words() const {
    std::vector<std::string> out;
    out.reserve(tokens_.size());
    for (const Token& t : tokens_) out.push_back(t.text);
    return out;
  }

  // Punctuation, numbers and the mask symbol are never attacked.
  bool attackable(std::size_t i) const {
    const std::string& w = word(i);
    if (w == kMaskToken) return false;
    return std::any_of(w.begin(), w.end(), text_detail::is_letter);
  }

  std::size_t attackable_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i) n += attackable(i) ? 1 : 0;
    return n;
  }

  // Tokens that are not pure punctuation; the denominator of perturbation %.
  std::size_t word_count() const {
    return static_cast<std::size_t>(std::count_if(
        tokens_.begin(), tokens_.end(),
        [](const Token& t) { return !is_punctuation_token(t.text); }));
  }

  TokenizedText with_word(std::size_t i, std::string replacement) const {
    TokenizedText copy = *this;
    copy.tokens_.at(i).text = std::move(replacement);
    return copy;
  }

  // Substitutes `replacement` re-cased to the original casing of word i.
  TokenizedText with_cased_word(std::size_t i, std::string_view replacement) const {
    return with_word(i, apply_case(replacement, case_map_.at(i)));
  }

  TokenizedText masked(std::size_t i) const {
    return with_word(i, std::string(kMaskToken));
  }

  TokenizedText with_companion(Companion companion) const {
    TokenizedText copy = *this;
    copy.companion_ = std::move(companion);
    return copy;
  }

  // The attacked field only.
  std::string detokenize() const {
    std::string out;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (i > 0 && tokens_[i].space_before) out.push_back(' ');
      out += tokens_[i].text;
    }
    return out;
  }

  // The attacked field joined with its companion, as a target would read it.
  std::string full_text() const {
    if (!companion_) return detokenize();
    return companion_->before ? companion_->text + " " + detokenize()
                              : detokenize() + " " + companion_->text;
  }

  bool operator==(const TokenizedText& other) const {
    return tokens_ == other.tokens_ && companion_ == other.companion_;
  }

 private:
  std::vector<Token> tokens_;
  std::string original_raw_;
  std::vector<CaseShape> case_map_;
  std::optional<Companion> companion_;
};

// Whitespace split, then leading and trailing punctuation peeled off each
// chunk. Runs of one repeated punctuation character stay together ("...").
// Word-internal punctuation is kept, so "You'd" and "Verhoeven's" are whole.
inline TokenizedText tokenize(std::string_view raw) {
  using text_detail::is_punct;
  using text_detail::is_space;

  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    while (pos < raw.size() && is_space(raw[pos])) ++pos;
    if (pos >= raw.size()) break;
    std::size_t end = pos;
    while (end < raw.size() && !is_space(raw[end])) ++end;
    std::string_view chunk = raw.substr(pos, end - pos);
    pos = end;

    bool first_in_chunk = true;
    auto emit = [&](std::string_view piece) {
      tokens.push_back(Token{std::string(piece), first_in_chunk && !tokens.empty()});
      first_in_chunk = false;
    };
    auto emit_punct_runs = [&](std::string_view run) {
      std::size_t i = 0;
      while (i < run.size()) {
        std::size_t j = i + 1;
        while (j < run.size() && run[j] == run[i]) ++j;
        emit(run.substr(i, j - i));
        i = j;
      }
    };

    std::size_t lead = 0;
    while (lead < chunk.size() && is_punct(chunk[lead])) ++lead;
    if (lead == chunk.size()) {
      emit_punct_runs(chunk);
      continue;
    }
    std::size_t trail = chunk.size();
    while (trail > lead && is_punct(chunk[trail - 1])) --trail;
    emit_punct_runs(chunk.substr(0, lead));
    emit(chunk.substr(lead, trail - lead));
    emit_punct_runs(chunk.substr(trail));
  }
  if (tokens.empty()) throw EmptyText();
  return TokenizedText(std::move(tokens), std::string(raw));
}

// Hook for callers that bring their own word segmentation.
using Tokenizer = std::function<TokenizedText(std::string_view)>;

inline Tokenizer default_tokenizer() {
  return [](std::string_view raw) { return tokenize(raw); };
}

}  // namespace ctxattack

#endif  // CTXATTACK_TEXT_HPP_
