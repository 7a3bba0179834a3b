#pragma once

// Unsupervised translation-based classifier. A proper noun anywhere in the
// MWE makes it Literal outright. Otherwise each content word is aligned into
// the translation, and it is literally translated when one of its aligned
// target words shares a multi-synset with it. MT(all) needs every content
// word literal, MT(one) needs at least one.

#include <string>
#include <vector>

#include "idiom/aligner.hpp"
#include "idiom/corpus.hpp"
#include "idiom/lexkb.hpp"
#include "idiom/morph.hpp"
#include "idiom/prediction.hpp"
#include "idiom/translate.hpp"

namespace idiom {

enum class MtMode { One, All };

struct WordLiteralness {
  std::string source_lemma;
  std::vector<std::string> aligned_targets;
  bool shared_synset = false;
  bool is_content = false;
};

inline WordLiteralness word_is_literal(const TokenAnalysis& analysis,
                                       const std::vector<std::string>& aligned_targets,
                                       const Lang& source_lang, const Lang& target_lang,
                                       const MultiWordnetIndex& index,
                                       const MorphLexicon& lexicon) {
  WordLiteralness out{analysis.lemma, aligned_targets, false, analysis.is_content};
  for (const auto& target : aligned_targets) {
    const auto target_lemma = analyze(target, target_lang, lexicon).lemma;
    if (lemmas_share_synset(index, analysis.lemma, source_lang, target_lemma, target_lang)) {
      out.shared_synset = true;
      break;
    }
  }
  return out;
}

inline Prediction classify_mt(const Instance& instance, const TranslationRecord& translation,
                              const AlignmentModel& model, const MultiWordnetIndex& index,
                              const MorphLexicon& lexicon, MtMode mode) {
  const Method method = mode == MtMode::All ? Method::MTAll : Method::MTOne;
  const auto mwe = analyze_mwe(instance.mwe, instance.language, lexicon);
  if (mwe.has_proper_noun) return {instance.id, Label::Literal, method, "proper noun"};

  if (translation.instance_id != instance.id || translation.translated_target_sentence.empty())
    throw DataError("missing translation for instance '" + instance.id + "'");
  const auto source = tokenize(instance.target);
  const auto target = tokenize(translation.translated_target_sentence);
  if (target.empty()) throw DataError("missing translation for instance '" + instance.id + "'");
  const auto start = locate_mwe(instance.mwe, instance.target);
  if (!start)
    throw DataError("mwe '" + instance.mwe + "' not found in target sentence of '" +
                    instance.id + "'");

  const auto links = refine_with_kb(viterbi_align(model, source, target), source,
                                    instance.language, target, translation.target_language, index,
                                    model, lexicon);

  bool any_content = false;
  for (const auto& t : mwe.tokens) any_content = any_content || t.is_content;

  std::size_t tested = 0;
  std::size_t literal = 0;
  std::string rationale;
  for (std::size_t w = 0; w < mwe.tokens.size(); ++w) {
    const auto& analysis = mwe.tokens[w];
    if (any_content && !analysis.is_content) continue;
    const auto word = word_is_literal(analysis, targets_of_source(links, *start + w, target),
                                      instance.language, translation.target_language, index,
                                      lexicon);
    ++tested;
    if (word.shared_synset) ++literal;
    if (!rationale.empty()) rationale += "; ";
    rationale += word.source_lemma + (word.shared_synset ? " literal" : " not-literal") + " [";
    for (std::size_t k = 0; k < word.aligned_targets.size(); ++k)
      rationale += (k ? " " : "") + word.aligned_targets[k];
    rationale += "]";
  }
  const bool is_literal = mode == MtMode::All ? literal == tested : literal > 0;
  return {instance.id, is_literal ? Label::Literal : Label::Idiomatic, method, rationale};
}

}  // namespace idiom
