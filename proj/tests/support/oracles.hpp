#pragma once

// Independent reference implementations used as test oracles. They are
// written for clarity, not speed, and share nothing with the library beyond
// the public data types and AlignmentModel::translation_prob.

#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "idiom/aligner.hpp"
#include "idiom/corpus.hpp"
#include "idiom/lexkb.hpp"
#include "idiom/morph.hpp"
#include "idiom/prediction.hpp"
#include "idiom/translate.hpp"
#include "support/generators.hpp"

namespace idiom::testing {

// ASCII-only reference normalizer.
inline std::string ref_normalize(const std::string& s) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) words.push_back(cur);
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

// Character-class tokenizer for ASCII text: within each whitespace chunk,
// everything before the first and after the last non-punctuation character
// becomes one token per character.
inline std::vector<std::string> ref_tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::string chunk;
  const auto flush = [&] {
    if (chunk.empty()) return;
    const auto punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
    std::size_t a = 0;
    while (a < chunk.size() && punct(chunk[a])) ++a;
    if (a == chunk.size()) {
      for (char c : chunk) out.emplace_back(1, c);
    } else {
      std::size_t b = chunk.size();
      while (punct(chunk[b - 1])) --b;
      for (std::size_t k = 0; k < a; ++k) out.emplace_back(1, chunk[k]);
      out.push_back(chunk.substr(a, b - a));
      for (std::size_t k = b; k < chunk.size(); ++k) out.emplace_back(1, chunk[k]);
    }
    chunk.clear();
  };
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)))
      flush();
    else
      chunk.push_back(c);
  }
  flush();
  return out;
}

// Brute force over raw knowledge-base rows: some synset of some knowledge
// base has both (lang_a, lemma_a) and (lang_b, lemma_b) as members.
inline bool brute_shares(const std::vector<RandomKb>& kbs, const std::string& lemma_a,
                         const std::string& lang_a, const std::string& lemma_b,
                         const std::string& lang_b) {
  const auto a = ref_normalize(lemma_a);
  const auto b = ref_normalize(lemma_b);
  for (const auto& kb : kbs) {
    std::map<std::string, std::pair<bool, bool>> hits;
    for (const auto& r : kb.members) {
      const auto lemma = ref_normalize(r.lemma);
      if (r.lang == lang_a && lemma == a) hits[r.synset].first = true;
      if (r.lang == lang_b && lemma == b) hits[r.synset].second = true;
    }
    for (const auto& [id, h] : hits)
      if (h.first && h.second) return true;
  }
  return false;
}

// Viterbi decoding evaluated straight from the scoring formula.
inline std::vector<std::optional<std::size_t>> ref_viterbi(const AlignmentModel& model,
                                                           const std::vector<std::string>& src,
                                                           const std::vector<std::string>& tgt) {
  const double n = static_cast<double>(src.size());
  const double m = static_cast<double>(tgt.size());
  std::vector<std::optional<std::size_t>> out(tgt.size());
  for (std::size_t j = 0; j < tgt.size(); ++j) {
    std::vector<double> prior;
    double z = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      prior.push_back(std::exp(-model.tension() * std::fabs(i / n - j / m)));
      z += prior.back();
    }
    std::vector<double> score;
    for (std::size_t i = 0; i < src.size(); ++i)
      score.push_back((1 - model.null_prob()) * prior[i] / z * model.translation_prob(src[i], tgt[j]));
    // Candidates sorted by (score desc, distance asc, i asc).
    std::size_t best = 0;
    for (std::size_t i = 1; i < src.size(); ++i) {
      const double di = std::fabs(i / n - j / m);
      const double db = std::fabs(best / n - j / m);
      if (score[i] > score[best] || (score[i] == score[best] && di < db)) best = i;
    }
    if (!(model.null_prob() * model.null_translation_prob(tgt[j]) > score[best])) out[j] = best;
  }
  return out;
}

// Rule replay for knowledge-base refinement over a plain target->source map.
inline std::vector<std::optional<std::size_t>> ref_refine(
    std::vector<std::optional<std::size_t>> links, const std::vector<std::string>& src,
    const Lang& slang, const std::vector<std::string>& tgt, const Lang& tlang,
    const MultiWordnetIndex& index, const AlignmentModel& model, const MorphLexicon& lexicon) {
  const double n = static_cast<double>(src.size());
  const double m = static_cast<double>(tgt.size());
  const auto ok = [&](std::size_t i, std::size_t j) {
    return lemmas_share_synset(index, analyze(src[i], slang, lexicon).lemma, slang,
                               analyze(tgt[j], tlang, lexicon).lemma, tlang);
  };
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t j = 0; j < links.size(); ++j)
    if (links[j]) order.emplace_back(*links[j], j);
  std::sort(order.begin(), order.end());

  for (const auto& [i, j] : order) {
    if (links[j] != i) continue;  // taken over earlier in the pass
    if (ok(i, j)) continue;
    std::optional<std::size_t> choice;
    for (std::size_t c = 0; c < tgt.size(); ++c) {
      if (c == j || !ok(i, c)) continue;
      if (links[c] && ok(*links[c], c)) continue;
      if (!choice) {
        choice = c;
        continue;
      }
      const double tc = model.translation_prob(src[i], tgt[c]);
      const double tb = model.translation_prob(src[i], tgt[*choice]);
      const double dc = std::fabs(i / n - c / m);
      const double db = std::fabs(i / n - *choice / m);
      if (tc > tb || (tc == tb && dc < db)) choice = c;
    }
    if (!choice) continue;
    links[j].reset();
    links[*choice] = i;
  }
  return links;
}

inline std::vector<std::optional<std::size_t>> as_vector(const AlignmentLinks& links) {
  std::vector<std::optional<std::size_t>> out;
  for (std::size_t j = 0; j < links.target_length(); ++j) out.push_back(links.source_of(j));
  return out;
}

// Steps (1)-(4) of the MT classifier, replayed from the reference pieces.
inline Label ref_classify_mt(const Instance& inst, const TranslationRecord& tr,
                             const AlignmentModel& model, const MultiWordnetIndex& index,
                             const MorphLexicon& lexicon, bool all_mode) {
  const auto mwe_tokens = ref_tokenize(inst.mwe);
  std::vector<TokenAnalysis> words;
  for (const auto& t : mwe_tokens) words.push_back(analyze(t, inst.language, lexicon));
  for (const auto& w : words)
    if (w.pos == Pos::Propn) return Label::Literal;

  const auto src = ref_tokenize(inst.target);
  const auto tgt = ref_tokenize(tr.translated_target_sentence);
  std::size_t start = 0;
  for (;; ++start) {
    bool match = start + mwe_tokens.size() <= src.size();
    for (std::size_t k = 0; match && k < mwe_tokens.size(); ++k)
      match = ref_normalize(src[start + k]) == ref_normalize(mwe_tokens[k]);
    if (match) break;
  }
  const auto links = ref_refine(ref_viterbi(model, src, tgt), src, inst.language, tgt,
                                tr.target_language, index, model, lexicon);

  bool any_content = false;
  for (const auto& w : words) any_content = any_content || w.is_content;
  std::size_t tested = 0, literal = 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (any_content && !words[k].is_content) continue;
    ++tested;
    bool lit = false;
    for (std::size_t j = 0; j < tgt.size(); ++j)
      if (links[j] == start + k &&
          lemmas_share_synset(index, words[k].lemma, inst.language,
                              analyze(tgt[j], tr.target_language, lexicon).lemma,
                              tr.target_language))
        lit = true;
    if (lit) ++literal;
  }
  const bool is_literal = all_mode ? literal == tested : literal > 0;
  return is_literal ? Label::Literal : Label::Idiomatic;
}

// Macro F1 from raw label lists via per-class precision and recall.
inline double ref_macro_f1(const std::vector<Label>& gold, const std::vector<Label>& pred) {
  double sum = 0.0;
  int classes = 0;
  for (auto c : {Label::Idiomatic, Label::Literal}) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t k = 0; k < gold.size(); ++k) {
      if (gold[k] == c && pred[k] == c) ++tp;
      if (gold[k] != c && pred[k] == c) ++fp;
      if (gold[k] == c && pred[k] != c) ++fn;
    }
    if (tp + fp + fn == 0) continue;
    ++classes;
    if (tp == 0) continue;
    const double p = tp / (tp + fp);
    const double r = tp / (tp + fn);
    sum += 2 * p * r / (p + r);
  }
  return classes ? sum / classes : 0.0;
}

}  // namespace idiom::testing
