#pragma once

// Shared vocabulary: language codes, error types, UTF-8 case folding and
// TSV line handling used by every module.

#include <compare>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace idiom {

enum class ErrorKind { Usage, Data, Provider };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

// Malformed or inconsistent input data. `row` is 1-based when known.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::optional<std::size_t> row = {})
      : Error(ErrorKind::Data, format(what, row)), row_(row) {}
  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  static std::string format(const std::string& what, std::optional<std::size_t> row) {
    if (!row) return what;
    return "row " + std::to_string(*row) + ": " + what;
  }
  std::optional<std::size_t> row_;
};

class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what) : Error(ErrorKind::Provider, what) {}
};

// Upper-case language code such as "EN", "PT", "GL", "IT".
class Lang {
 public:
  Lang() = default;
  explicit Lang(std::string_view code) {
    if (code.size() < 2 || code.size() > 3)
      throw DataError("invalid language code '" + std::string(code) + "'");
    for (char c : code) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c < 'A' || c > 'Z')
        throw DataError("invalid language code '" + std::string(code) + "'");
      code_.push_back(c);
    }
  }

  const std::string& code() const noexcept { return code_; }
  bool empty() const noexcept { return code_.empty(); }

  auto operator<=>(const Lang&) const = default;

 private:
  std::string code_;
};

inline const Lang kEnglish{"EN"};
inline const Lang kPortuguese{"PT"};
inline const Lang kGalician{"GL"};
inline const Lang kItalian{"IT"};

// Languages an instance may be written in.
inline bool is_instance_language(const Lang& lang) {
  return lang == kEnglish || lang == kPortuguese || lang == kGalician;
}

// Galician is processed as Portuguese wherever Galician resources are thin.
inline std::vector<Lang> lookup_languages(const Lang& lang) {
  if (lang == kGalician) return {kGalician, kPortuguese};
  return {lang};
}

namespace text {

// Lower-cases ASCII and the Latin-1 Supplement capitals (U+00C0..U+00DE,
// except U+00D7); other bytes pass through unchanged.
inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c == 0xC3 && i + 1 < s.size()) {
      auto next = static_cast<unsigned char>(s[i + 1]);
      if (next >= 0x80 && next <= 0x9E && next != 0x97) next += 0x20;
      out.push_back(static_cast<char>(c));
      out.push_back(static_cast<char>(next));
      ++i;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

inline bool starts_uppercase(std::string_view s) {
  if (s.empty()) return false;
  const auto c = static_cast<unsigned char>(s[0]);
  if (c >= 'A' && c <= 'Z') return true;
  if (c == 0xC3 && s.size() > 1) {
    const auto next = static_cast<unsigned char>(s[1]);
    return next >= 0x80 && next <= 0x9E && next != 0x97;
  }
  return false;
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Lower-case, collapse whitespace runs to one space, trim.
inline std::string normalize(std::string_view s) {
  std::string lowered = to_lower(s);
  std::string out;
  out.reserve(lowered.size());
  bool pending_space = false;
  for (char c : lowered) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

inline std::size_t count_whitespace_tokens(std::string_view s) {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : s) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++n;
    }
  }
  return n;
}

}  // namespace text

namespace tsv {

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Reads all lines of a UTF-8 text file, dropping a trailing '\r' per line.
inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline void check_field(std::string_view field, std::string_view what) {
  if (field.find_first_of("\t\n\r") != std::string_view::npos)
    throw DataError(std::string(what) + " contains a tab or newline: '" + std::string(field) + "'");
}

inline std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back('\t');
    out += fields[i];
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace tsv

}  // namespace idiom
