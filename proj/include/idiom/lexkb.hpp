#pragma once

// Multilingual wordnet index: multi-synset membership and per-language
// glosses, queried with union semantics over every loaded knowledge base.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idiom/common.hpp"

namespace idiom {

using LangLemma = std::pair<Lang, std::string>;

struct MultiSynset {
  std::string id;
  std::set<LangLemma> members;      // lemmas normalized
  std::map<Lang, std::string> glosses;
};

struct KbLoadReport {
  std::string name;
  std::size_t synsets = 0;
  std::size_t members = 0;
  std::size_t glosses = 0;
  std::vector<std::string> warnings;
};

class KnowledgeBase {
 public:
  explicit KnowledgeBase(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  // Returns false when the (synset, lang, lemma) triple is already present.
  bool add_member(const std::string& synset_id, const Lang& lang, std::string_view lemma) {
    if (synset_id.empty()) throw DataError("empty synset id");
    auto normalized = text::normalize(lemma);
    if (normalized.empty()) throw DataError("empty lemma in synset '" + synset_id + "'");
    auto& synset = synsets_[synset_id];
    synset.id = synset_id;
    LangLemma key{lang, std::move(normalized)};
    if (!synset.members.insert(key).second) return false;
    auto& ids = index_[key];
    ids.insert(std::lower_bound(ids.begin(), ids.end(), synset_id), synset_id);
    ++member_count_;
    return true;
  }

  // Returns false when the synset already has a gloss in `lang` (first wins).
  bool add_gloss(const std::string& synset_id, const Lang& lang, std::string gloss) {
    auto it = synsets_.find(synset_id);
    if (it == synsets_.end()) throw DataError("gloss for unknown synset '" + synset_id + "'");
    if (!it->second.glosses.emplace(lang, std::move(gloss)).second) return false;
    ++gloss_count_;
    return true;
  }

  // Synset ids containing (lang, lemma), sorted. `lemma` must be normalized.
  const std::vector<std::string>& synsets_of(const Lang& lang, const std::string& lemma) const {
    static const std::vector<std::string> kNone;
    auto it = index_.find({lang, lemma});
    return it == index_.end() ? kNone : it->second;
  }

  bool shares_synset(std::string_view lemma_a, const Lang& lang_a, std::string_view lemma_b,
                     const Lang& lang_b) const {
    const auto& a = synsets_of(lang_a, text::normalize(lemma_a));
    if (a.empty()) return false;
    const auto& b = synsets_of(lang_b, text::normalize(lemma_b));
    // Both sorted: linear intersection test.
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
      if (*i == *j) return true;
      if (*i < *j) ++i; else ++j;
    }
    return false;
  }

  const MultiSynset* find(const std::string& synset_id) const {
    auto it = synsets_.find(synset_id);
    return it == synsets_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, MultiSynset>& synsets() const noexcept { return synsets_; }
  std::size_t synset_count() const noexcept { return synsets_.size(); }
  std::size_t member_count() const noexcept { return member_count_; }
  std::size_t gloss_count() const noexcept { return gloss_count_; }

  // Full scan: the inverted index lists exactly the synsets holding each member.
  bool index_consistent() const {
    std::map<LangLemma, std::vector<std::string>> rebuilt;
    for (const auto& [id, synset] : synsets_)
      for (const auto& member : synset.members) rebuilt[member].push_back(id);
    return rebuilt == index_;
  }

  // Snapshot text: `#idiom-kb\tNAME`, then `S\tid\tlang\tlemma` and
  // `G\tid\tlang\tgloss` rows in synset id order.
  std::string snapshot() const {
    std::string out = "#idiom-kb\t" + name_ + "\n";
    for (const auto& [id, synset] : synsets_)
      for (const auto& [lang, lemma] : synset.members)
        out += tsv::join({"S", id, lang.code(), lemma}) + "\n";
    for (const auto& [id, synset] : synsets_)
      for (const auto& [lang, gloss] : synset.glosses)
        out += tsv::join({"G", id, lang.code(), gloss}) + "\n";
    return out;
  }

 private:
  std::string name_;
  std::map<std::string, MultiSynset> synsets_;
  std::map<LangLemma, std::vector<std::string>> index_;
  std::size_t member_count_ = 0;
  std::size_t gloss_count_ = 0;
};

namespace detail {

inline std::vector<std::string> expect_columns(const std::string& line, std::size_t n,
                                               std::size_t row, const std::string& path) {
  auto fields = tsv::split(line);
  if (fields.size() != n)
    throw DataError("expected " + std::to_string(n) + " columns, found " +
                        std::to_string(fields.size()) + " in '" + path + "'",
                    row);
  return fields;
}

}  // namespace detail

// synsets.tsv: `synset_id lang lemma`; glosses.tsv: `synset_id lang gloss`.
inline KnowledgeBase read_knowledge_base(const std::string& name, const std::string& synset_path,
                                         const std::optional<std::string>& gloss_path,
                                         KbLoadReport* report = nullptr) {
  KnowledgeBase kb(name);
  std::vector<std::string> warnings;
  const auto synset_lines = tsv::read_lines(synset_path);
  for (std::size_t n = 0; n < synset_lines.size(); ++n) {
    if (synset_lines[n].empty()) continue;
    const auto f = detail::expect_columns(synset_lines[n], 3, n + 1, synset_path);
    try {
      if (!kb.add_member(f[0], Lang(f[1]), f[2]))
        warnings.push_back(synset_path + ":" + std::to_string(n + 1) +
                           ": duplicate member ignored (" + f[0] + ", " + f[1] + ", " + f[2] +
                           ")");
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " in '" + synset_path + "'", n + 1);
    }
  }
  if (gloss_path) {
    const auto gloss_lines = tsv::read_lines(*gloss_path);
    for (std::size_t n = 0; n < gloss_lines.size(); ++n) {
      if (gloss_lines[n].empty()) continue;
      const auto f = detail::expect_columns(gloss_lines[n], 3, n + 1, *gloss_path);
      try {
        if (!kb.add_gloss(f[0], Lang(f[1]), f[2]))
          warnings.push_back(*gloss_path + ":" + std::to_string(n + 1) +
                             ": second gloss for (" + f[0] + ", " + f[1] + ") ignored");
      } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " in '" + *gloss_path + "'", n + 1);
      }
    }
  }
  if (report) {
    report->name = name;
    report->synsets = kb.synset_count();
    report->members = kb.member_count();
    report->glosses = kb.gloss_count();
    report->warnings = std::move(warnings);
  }
  return kb;
}

inline KnowledgeBase read_kb_snapshot(const std::string& path) {
  const auto lines = tsv::read_lines(path);
  if (lines.empty() || lines[0].rfind("#idiom-kb\t", 0) != 0)
    throw DataError("not a knowledge base snapshot: '" + path + "'", 1);
  KnowledgeBase kb(lines[0].substr(std::string_view("#idiom-kb\t").size()));
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty() || lines[n][0] == '#') continue;
    const auto f = detail::expect_columns(lines[n], 4, n + 1, path);
    try {
      if (f[0] == "S")
        kb.add_member(f[1], Lang(f[2]), f[3]);
      else if (f[0] == "G")
        kb.add_gloss(f[1], Lang(f[2]), f[3]);
      else
        throw DataError("unknown record type '" + f[0] + "'");
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " in '" + path + "'", n + 1);
    }
  }
  return kb;
}

struct SenseRef {
  std::size_t kb;
  const MultiSynset* synset;
};

class MultiWordnetIndex {
 public:
  KbLoadReport load_kb(const std::string& name, const std::string& synset_path,
                       const std::optional<std::string>& gloss_path = std::nullopt) {
    KbLoadReport report;
    add(read_knowledge_base(name, synset_path, gloss_path, &report));
    return report;
  }

  void add(KnowledgeBase kb) {
    for (const auto& existing : kbs_)
      if (existing.name() == kb.name())
        throw DataError("knowledge base '" + kb.name() + "' loaded twice");
    kbs_.push_back(std::move(kb));
  }

  const std::vector<KnowledgeBase>& knowledge_bases() const noexcept { return kbs_; }
  bool empty() const noexcept { return kbs_.empty(); }

  // True iff some synset of any loaded knowledge base holds both lemmas.
  bool shares_synset(std::string_view lemma_a, const Lang& lang_a, std::string_view lemma_b,
                     const Lang& lang_b) const {
    return std::any_of(kbs_.begin(), kbs_.end(), [&](const KnowledgeBase& kb) {
      return kb.shares_synset(lemma_a, lang_a, lemma_b, lang_b);
    });
  }

  // Same query restricted to one knowledge base, for ablations.
  bool shares_synset_in(std::string_view kb_name, std::string_view lemma_a, const Lang& lang_a,
                        std::string_view lemma_b, const Lang& lang_b) const {
    for (const auto& kb : kbs_)
      if (kb.name() == kb_name) return kb.shares_synset(lemma_a, lang_a, lemma_b, lang_b);
    throw UsageError("no knowledge base named '" + std::string(kb_name) + "'");
  }

  // Synsets containing (lang, lemma): knowledge base load order, then id order.
  std::vector<SenseRef> senses_for(std::string_view lemma, const Lang& lang) const {
    std::vector<SenseRef> out;
    const auto normalized = text::normalize(lemma);
    for (std::size_t k = 0; k < kbs_.size(); ++k)
      for (const auto& id : kbs_[k].synsets_of(lang, normalized))
        out.push_back({k, kbs_[k].find(id)});
    return out;
  }

  std::vector<std::string> glosses_for(std::string_view lemma, const Lang& lang,
                                       const Lang& gloss_lang) const {
    std::vector<std::string> out;
    for (const auto& sense : senses_for(lemma, lang)) {
      auto it = sense.synset->glosses.find(gloss_lang);
      if (it == sense.synset->glosses.end()) continue;
      if (std::find(out.begin(), out.end(), it->second) == out.end()) out.push_back(it->second);
    }
    return out;
  }

 private:
  std::vector<KnowledgeBase> kbs_;
};

// Synset test used by alignment refinement and the MT classifier. Galician
// lemmas are also tried as Portuguese.
inline bool lemmas_share_synset(const MultiWordnetIndex& index, std::string_view source_lemma,
                                const Lang& source_lang, std::string_view target_lemma,
                                const Lang& target_lang) {
  for (const auto& sl : lookup_languages(source_lang))
    for (const auto& tl : lookup_languages(target_lang))
      if (index.shares_synset(source_lemma, sl, target_lemma, tl)) return true;
  return false;
}

}  // namespace idiom
