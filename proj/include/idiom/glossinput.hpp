#pragma once

// Classifier input sequences.
//   Baseline: "<target sentence> [SEP] <mwe>"
//   Gloss:    baseline + " [SEP] <gloss>" for every sense of every MWE word,
//             word order first, then knowledge-base/synset order.

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idiom/corpus.hpp"
#include "idiom/lexkb.hpp"
#include "idiom/morph.hpp"

namespace idiom {

enum class SequenceVariant { Baseline, GlossEn, GlossSrc };

inline std::string_view to_string(SequenceVariant v) {
  switch (v) {
    case SequenceVariant::Baseline: return "baseline";
    case SequenceVariant::GlossEn: return "gloss-en";
    case SequenceVariant::GlossSrc: return "gloss-src";
  }
  return "baseline";
}

inline SequenceVariant parse_variant(std::string_view s) {
  for (auto v : {SequenceVariant::Baseline, SequenceVariant::GlossEn, SequenceVariant::GlossSrc})
    if (s == to_string(v)) return v;
  throw UsageError("unknown sequence variant '" + std::string(s) + "'");
}

inline constexpr std::string_view kSeparator = " [SEP] ";
inline constexpr std::size_t kDefaultTokenBudget = 256;

struct SequenceRecord {
  std::string instance_id;
  std::string text;
  std::optional<Label> label;
  SequenceVariant variant = SequenceVariant::Baseline;

  bool operator==(const SequenceRecord&) const = default;
};

inline SequenceRecord build_baseline_sequence(const Instance& instance) {
  return {instance.id, instance.target + std::string(kSeparator) + instance.mwe, instance.label,
          SequenceVariant::Baseline};
}

// Galician is looked up, and glossed, as Portuguese.
inline Lang gloss_query_language(const Lang& lang) {
  return lang == kGalician ? kPortuguese : lang;
}

// Glosses in segment order, before budget truncation.
inline std::vector<std::string> collect_glosses(const Instance& instance,
                                                const MultiWordnetIndex& index,
                                                const MorphLexicon& lexicon,
                                                SequenceVariant policy) {
  const Lang query_lang = gloss_query_language(instance.language);
  std::vector<std::string> glosses;
  for (const auto& token : tokenize(instance.mwe)) {
    const auto lemma = analyze(token, instance.language, lexicon).lemma;
    for (const auto& sense : index.senses_for(lemma, query_lang)) {
      const auto& available = sense.synset->glosses;
      auto it = available.end();
      if (policy == SequenceVariant::GlossSrc) it = available.find(query_lang);
      if (it == available.end()) it = available.find(kEnglish);
      if (it == available.end()) continue;
      if (std::find(glosses.begin(), glosses.end(), it->second) == glosses.end())
        glosses.push_back(it->second);
    }
  }
  return glosses;
}

// Whole glosses are dropped from the tail until the whitespace-token count
// fits `token_budget`; the baseline part is never cut.
inline SequenceRecord build_gloss_sequence(const Instance& instance, const MultiWordnetIndex& index,
                                           const MorphLexicon& lexicon, SequenceVariant policy,
                                           std::size_t token_budget = kDefaultTokenBudget) {
  if (policy == SequenceVariant::Baseline)
    throw UsageError("gloss sequence requires a gloss policy");
  auto record = build_baseline_sequence(instance);
  record.variant = policy;
  auto glosses = collect_glosses(instance, index, lexicon, policy);

  const std::size_t sep_tokens = text::count_whitespace_tokens(kSeparator);
  std::size_t tokens = text::count_whitespace_tokens(record.text);
  std::vector<std::size_t> running;
  for (const auto& g : glosses) {
    tokens += sep_tokens + text::count_whitespace_tokens(g);
    running.push_back(tokens);
  }
  std::size_t keep = glosses.size();
  while (keep > 0 && running[keep - 1] > token_budget) --keep;
  for (std::size_t k = 0; k < keep; ++k) record.text += std::string(kSeparator) + glosses[k];
  return record;
}

// sequences.tsv: `instance_id variant label text`, no header.
inline std::string format_sequences(const std::vector<SequenceRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    tsv::check_field(r.instance_id, "instance id");
    tsv::check_field(r.text, "sequence text");
    out += tsv::join({r.instance_id, std::string(to_string(r.variant)),
                      r.label ? std::string(to_string(*r.label)) : std::string(), r.text}) +
           "\n";
  }
  return out;
}

inline std::vector<SequenceRecord> parse_sequences(const std::vector<std::string>& lines,
                                                   const std::string& source = "sequences") {
  std::vector<SequenceRecord> out;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto f = tsv::split(lines[n]);
    if (f.size() != 4) throw DataError("expected 4 columns in '" + source + "'", n + 1);
    SequenceRecord r;
    r.instance_id = f[0];
    r.variant = parse_variant(f[1]);
    if (!f[2].empty()) r.label = parse_label(f[2]);
    r.text = f[3];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace idiom
