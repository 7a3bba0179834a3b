#pragma once

// Tokenization, lexicon-driven lemmatization and POS tagging.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idiom/common.hpp"

namespace idiom {

enum class Pos { Noun, Propn, Verb, Adj, Adv, Other };

inline std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Propn: return "PROPN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

// Any UPOS tag outside the content classes and PROPN maps to Other.
inline Pos parse_pos(std::string_view tag) {
  if (tag == "NOUN") return Pos::Noun;
  if (tag == "PROPN") return Pos::Propn;
  if (tag == "VERB") return Pos::Verb;
  if (tag == "ADJ") return Pos::Adj;
  if (tag == "ADV") return Pos::Adv;
  return Pos::Other;
}

inline bool is_content_pos(Pos pos) {
  return pos == Pos::Noun || pos == Pos::Verb || pos == Pos::Adj || pos == Pos::Adv;
}

struct TokenAnalysis {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::Other;
  bool is_content = false;

  bool operator==(const TokenAnalysis&) const = default;
};

namespace detail {

inline constexpr std::array<std::string_view, 11> kUtf8Punct = {
    "“", "”", "‘", "’", "«", "»", "…", "–", "\xe2\x80\x94", "¿", "¡"};

inline bool is_ascii_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
         (c >= 123 && c <= 126);
}

// Length of the punctuation sequence starting at s[pos], 0 if none.
inline std::size_t punct_at(std::string_view s, std::size_t pos) {
  if (is_ascii_punct(static_cast<unsigned char>(s[pos]))) return 1;
  for (auto p : kUtf8Punct)
    if (s.substr(pos, p.size()) == p) return p.size();
  return 0;
}

// Length of the punctuation sequence ending right before `end`, 0 if none.
inline std::size_t punct_before(std::string_view s, std::size_t end) {
  if (is_ascii_punct(static_cast<unsigned char>(s[end - 1]))) return 1;
  for (auto p : kUtf8Punct)
    if (end >= p.size() && s.substr(end - p.size(), p.size()) == p) return p.size();
  return 0;
}

}  // namespace detail

// Whitespace split, then leading and trailing punctuation peeled off into
// one token per punctuation character. Inner punctuation stays attached.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text::is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !text::is_space(text[j])) ++j;
    if (j == i) break;
    std::string_view chunk = text.substr(i, j - i);
    i = j;

    std::size_t begin = 0;
    while (begin < chunk.size()) {
      const std::size_t n = detail::punct_at(chunk, begin);
      if (n == 0) break;
      tokens.emplace_back(chunk.substr(begin, n));
      begin += n;
    }
    std::vector<std::string> trailing;
    std::size_t end = chunk.size();
    while (end > begin) {
      const std::size_t n = detail::punct_before(chunk, end);
      if (n == 0) break;
      trailing.emplace_back(chunk.substr(end - n, n));
      end -= n;
    }
    if (end > begin) tokens.emplace_back(chunk.substr(begin, end - begin));
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

// (language, lower-cased surface) -> analyses; the first entry is the default.
class MorphLexicon {
 public:
  struct Entry {
    std::string lemma;
    Pos pos;
  };

  void add(const Lang& lang, std::string_view surface, std::string_view lemma, Pos pos) {
    if (lemma.empty()) throw DataError("empty lemma for '" + std::string(surface) + "'");
    entries_[{lang, text::to_lower(surface)}].push_back({text::normalize(lemma), pos});
  }

  const std::vector<Entry>* find(const Lang& lang, std::string_view surface) const {
    auto it = entries_.find({lang, text::to_lower(surface)});
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const noexcept { return entries_.size(); }

  // lexicon.tsv: `lang surface lemma pos`, no header.
  static MorphLexicon load(const std::string& path) {
    MorphLexicon lexicon;
    const auto lines = tsv::read_lines(path);
    for (std::size_t row = 0; row < lines.size(); ++row) {
      if (lines[row].empty()) continue;
      const auto fields = tsv::split(lines[row]);
      if (fields.size() != 4)
        throw DataError("lexicon row has " + std::to_string(fields.size()) +
                            " columns, expected 4 in '" + path + "'",
                        row + 1);
      try {
        lexicon.add(Lang(fields[0]), fields[1], fields[2], parse_pos(fields[3]));
      } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " in '" + path + "'", row + 1);
      }
    }
    return lexicon;
  }

 private:
  std::map<std::pair<Lang, std::string>, std::vector<Entry>> entries_;
};

inline bool has_word_character(std::string_view token) {
  for (std::size_t i = 0; i < token.size();) {
    const std::size_t n = detail::punct_at(token, i);
    if (n == 0) return true;
    i += n;
  }
  return false;
}

// Default lexicon analysis. Galician falls back to Portuguese entries.
// Unknown tokens: capitalized -> PROPN, punctuation-only -> OTHER, else NOUN.
inline TokenAnalysis analyze(std::string_view token, const Lang& lang,
                             const MorphLexicon& lexicon) {
  TokenAnalysis out;
  out.surface = std::string(token);
  for (const auto& l : lookup_languages(lang)) {
    if (const auto* entries = lexicon.find(l, token)) {
      out.lemma = entries->front().lemma;
      out.pos = entries->front().pos;
      out.is_content = is_content_pos(out.pos);
      return out;
    }
  }
  out.lemma = text::to_lower(token);
  if (!has_word_character(token))
    out.pos = Pos::Other;
  else if (text::starts_uppercase(token))
    out.pos = Pos::Propn;
  else
    out.pos = Pos::Noun;
  out.is_content = is_content_pos(out.pos);
  return out;
}

struct MweAnalysis {
  std::vector<TokenAnalysis> tokens;
  bool has_proper_noun = false;
};

inline MweAnalysis analyze_mwe(std::string_view mwe, const Lang& lang,
                               const MorphLexicon& lexicon) {
  MweAnalysis out;
  for (const auto& token : tokenize(mwe)) {
    out.tokens.push_back(analyze(token, lang, lexicon));
    if (out.tokens.back().pos == Pos::Propn) out.has_proper_noun = true;
  }
  return out;
}

}  // namespace idiom
