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

#ifndef CTXATTACK_STUB_SUITE_HPP_
#define CTXATTACK_STUB_SUITE_HPP_

// Builds a stub BackendSuite from a JSON description:
//
//   {
//     "target":    {"priors": [..], "weights": {"word": [per-class], ...}}
//                  or {"positive_prior": p, "polarity": {"word": w, ...}},
//     "masked_lm": {"word": ["fill", ...], "word|neighbour": [...], ...},
//     "embedder":  {"dimension": 512, "vectors": {"word": [...], ...}},
//     "fluency":   {"unigram": {"word": p}, "bigram": {"prev word": p}},
//     "pos":       {"word": {"tag": "noun", "number": "plural", "lemma": ".."}},
//     "irregular_plurals": {"child": "children"}
//   }

#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ctxattack/backends.hpp"
#include "ctxattack/errors.hpp"
#include "ctxattack/stub_backends.hpp"

namespace ctxattack {

inline PosTag parse_pos_tag(std::string_view s) {
  static const std::map<std::string_view, PosTag> kTags = {
      {"noun", PosTag::noun}, {"verb", PosTag::verb},   {"adj", PosTag::adj},
      {"adv", PosTag::adv},   {"pron", PosTag::pron},   {"det", PosTag::det},
      {"adp", PosTag::adp},   {"conj", PosTag::conj},   {"num", PosTag::num},
      {"prt", PosTag::prt},   {"punct", PosTag::punct}, {"other", PosTag::other}};
  auto it = kTags.find(s);
  if (it == kTags.end()) throw ConfigError("unknown POS tag '" + std::string(s) + "'");
  return it->second;
}

inline BackendSuite stub_suite_from_json(const nlohmann::json& j) {
  try {
    BackendSuite suite;

    const auto& t = j.at("target");
    if (t.contains("polarity")) {
      suite.target = std::make_shared<KeywordTarget>(KeywordTarget::binary(
          t.value("positive_prior", 0.5), t.at("polarity").get<std::map<std::string, double>>()));
    } else {
      std::map<std::string, std::vector<double>> weights;
      for (const auto& [w, v] : t.at("weights").items()) weights[to_lower(w)] = v.get<std::vector<double>>();
      suite.target = std::make_shared<KeywordTarget>(t.at("priors").get<std::vector<double>>(),
                                                     std::move(weights));
    }

    suite.masked_lm = std::make_shared<TableMaskedLM>(
        j.value("masked_lm", nlohmann::json::object())
            .get<std::map<std::string, std::vector<std::string>>>());

    const auto e = j.value("embedder", nlohmann::json::object());
    suite.embedder = std::make_shared<BagOfWordsEmbedder>(
        e.value("dimension", BagOfWordsEmbedder::kDefaultDimension),
        e.value("vectors", nlohmann::json::object())
            .get<std::map<std::string, std::vector<double>>>());

    const auto f = j.value("fluency", nlohmann::json::object());
    std::map<std::pair<std::string, std::string>, double> bigram;
    const auto bigram_json = f.value("bigram", nlohmann::json::object());
    for (const auto& [key, p] : bigram_json.items()) {
      const auto space = key.find(' ');
      if (space == std::string::npos) throw ConfigError("bigram key '" + key + "' needs two words");
      bigram[{to_lower(key.substr(0, space)), to_lower(key.substr(space + 1))}] = p.get<double>();
    }
    suite.fluency = std::make_shared<BigramFluency>(
        f.value("unigram", nlohmann::json::object()).get<std::map<std::string, double>>(),
        std::move(bigram));

    std::map<std::string, PosInfo> lexicon;
    const auto pos_json = j.value("pos", nlohmann::json::object());
    for (const auto& [word, info] : pos_json.items()) {
      PosInfo p;
      p.tag = parse_pos_tag(info.at("tag").get<std::string>());
      const std::string number = info.value("number", "none");
      p.number = number == "plural"     ? GrammaticalNumber::plural
                 : number == "singular" ? GrammaticalNumber::singular
                                        : GrammaticalNumber::none;
      p.lemma = info.value("lemma", "");
      lexicon[to_lower(word)] = std::move(p);
    }
    suite.pos_tagger = std::make_shared<LexiconPosTagger>(
        std::move(lexicon), j.value("irregular_plurals", nlohmann::json::object())
                                .get<std::map<std::string, std::string>>());
    return suite;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed stub suite: ") + ex.what());
  }
}

inline BackendSuite load_stub_suite(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stub suite " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("stub suite " + path + " is not valid JSON");
  return stub_suite_from_json(j);
}

// A small restaurant-review sentiment world (0 = negative, 1 = positive).
inline nlohmann::json demo_stub_suite_json() {
  return nlohmann::json::parse(R"({
    "target": {
      "positive_prior": 0.5,
      "polarity": {
        "great": 0.3, "friendly": 0.2, "delicious": 0.3, "nice": 0.25, "love": 0.25,
        "good": 0.15, "fresh": 0.1, "helpful": 0.15, "enjoyed": 0.2, "tasty": 0.15,
        "decent": 0.05, "fine": 0.02, "polite": 0.08, "like": 0.05,
        "terrible": -0.35, "rude": -0.3, "bland": -0.25, "awful": -0.35, "slow": -0.2,
        "cold": -0.2, "dirty": -0.3, "hate": -0.3, "hated": -0.3, "late": -0.15,
        "lukewarm": -0.1, "noisy": -0.15
      }
    },
    "masked_lm": {
      "great": ["good", "fine", "decent", "okay", "superb", "terrible"],
      "friendly": ["polite", "nice", "helpful", "rude", "calm"],
      "delicious": ["tasty", "fresh", "okay", "bland", "simple"],
      "nice": ["fine", "okay", "decent", "pleasant"],
      "love": ["like", "enjoy", "hate", "visit"],
      "loved": ["liked", "enjoyed", "visited", "hated"],
      "good": ["decent", "fine", "okay", "great"],
      "terrible": ["bad", "awful", "poor", "okay"],
      "rude": ["unfriendly", "cold", "friendly", "slow"],
      "bland": ["plain", "simple", "delicious", "mild"],
      "slow": ["late", "sluggish", "quick"],
      "food": ["meal", "dishes", "menu"],
      "staff": ["waiters", "servers", "crew"],
      "service": ["staff", "waiter", "help"],
      "place": ["spot", "restaurant", "venue"],
      "soup": ["stew", "broth", "salad"]
    },
    "fluency": {
      "unigram": {"the": 0.06, "we": 0.02, "i": 0.03},
      "bigram": {
        "was great": 0.02, "was good": 0.03, "was fine": 0.025, "was decent": 0.02,
        "was okay": 0.02, "was superb": 0.001, "were friendly": 0.02, "were polite": 0.02,
        "were nice": 0.02, "were helpful": 0.02
      }
    },
    "pos": {
      "great": {"tag": "adj"}, "good": {"tag": "adj"}, "fine": {"tag": "adj"},
      "decent": {"tag": "adj"}, "okay": {"tag": "adj"}, "superb": {"tag": "adj"},
      "terrible": {"tag": "adj"}, "friendly": {"tag": "adj"}, "polite": {"tag": "adj"},
      "nice": {"tag": "adj"}, "helpful": {"tag": "adj"}, "rude": {"tag": "adj"},
      "calm": {"tag": "adj"}, "delicious": {"tag": "adj"}, "tasty": {"tag": "adj"},
      "fresh": {"tag": "adj"}, "bland": {"tag": "adj"}, "simple": {"tag": "adj"},
      "pleasant": {"tag": "adj"}, "bad": {"tag": "adj"}, "awful": {"tag": "adj"},
      "poor": {"tag": "adj"}, "unfriendly": {"tag": "adj"}, "cold": {"tag": "adj"},
      "slow": {"tag": "adj"}, "plain": {"tag": "adj"}, "mild": {"tag": "adj"},
      "late": {"tag": "adj"}, "sluggish": {"tag": "adj"}, "quick": {"tag": "adj"},
      "love": {"tag": "verb", "lemma": "love"}, "like": {"tag": "verb", "lemma": "like"},
      "enjoy": {"tag": "verb", "lemma": "enjoy"}, "hate": {"tag": "verb", "lemma": "hate"},
      "visit": {"tag": "verb", "lemma": "visit"}, "loved": {"tag": "verb", "lemma": "love"},
      "liked": {"tag": "verb", "lemma": "like"}, "enjoyed": {"tag": "verb", "lemma": "enjoy"},
      "visited": {"tag": "verb", "lemma": "visit"}, "hated": {"tag": "verb", "lemma": "hate"},
      "food": {"tag": "noun", "number": "singular"}, "meal": {"tag": "noun", "number": "singular"},
      "dishes": {"tag": "noun", "number": "plural"}, "menu": {"tag": "noun", "number": "singular"},
      "staff": {"tag": "noun", "number": "singular"}, "waiters": {"tag": "noun", "number": "plural"},
      "servers": {"tag": "noun", "number": "plural"}, "crew": {"tag": "noun", "number": "singular"},
      "service": {"tag": "noun", "number": "singular"}, "waiter": {"tag": "noun", "number": "singular"},
      "help": {"tag": "noun", "number": "singular"}, "place": {"tag": "noun", "number": "singular"},
      "spot": {"tag": "noun", "number": "singular"}, "restaurant": {"tag": "noun", "number": "singular"},
      "venue": {"tag": "noun", "number": "singular"}, "soup": {"tag": "noun", "number": "singular"},
      "stew": {"tag": "noun", "number": "singular"}, "broth": {"tag": "noun", "number": "singular"},
      "salad": {"tag": "noun", "number": "singular"}
    }
  })");
}

inline BackendSuite demo_stub_suite() { return stub_suite_from_json(demo_stub_suite_json()); }

}  // namespace ctxattack

#endif  // CTXATTACK_STUB_SUITE_HPP_
