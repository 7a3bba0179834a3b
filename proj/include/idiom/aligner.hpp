#pragma once

// Word alignment: lexical translation model with a diagonal prior over
// source positions and a null source, trained by EM; Viterbi decoding; a
// knowledge-base refinement pass; Pharaoh-format I/O.
//
// For a target token e_j (0-based j of m) and source f_i (0-based i of n):
//   p(a_j = i)    = (1 - p0) * exp(-lambda * |i/n - j/m|) / Z_j
//   p(a_j = null) = p0
//   p(e_j, a_j)   = p(a_j) * t(e_j | f_{a_j})
// Tokens are case-folded before lookup.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "idiom/common.hpp"
#include "idiom/lexkb.hpp"
#include "idiom/morph.hpp"

namespace idiom {

struct SentencePair {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

using Bitext = std::vector<SentencePair>;

struct AlignerOptions {
  std::size_t iterations = 5;
  double tension = 4.0;     // lambda
  double null_prob = 0.08;  // p0
  double smoothing = 0.01;  // add-alpha
};

inline double diagonal_distance(std::size_t i, std::size_t n, std::size_t j, std::size_t m) {
  return std::abs(static_cast<double>(i) / static_cast<double>(n) -
                  static_cast<double>(j) / static_cast<double>(m));
}

namespace detail {

class Vocabulary {
 public:
  std::uint32_t add(const std::string& word) {
    auto [it, inserted] = ids_.emplace(word, static_cast<std::uint32_t>(words_.size()));
    if (inserted) words_.push_back(word);
    return it->second;
  }
  std::optional<std::uint32_t> find(const std::string& word) const {
    auto it = ids_.find(word);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& word(std::uint32_t id) const { return words_[id]; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> words_;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

class AlignmentModel {
 public:
  double tension() const noexcept { return options_.tension; }
  double null_prob() const noexcept { return options_.null_prob; }
  const AlignerOptions& options() const noexcept { return options_; }
  std::size_t target_vocab_size() const noexcept { return target_vocab_.size(); }
  std::size_t source_vocab_size() const noexcept { return rows_.empty() ? 0 : rows_.size() - 1; }

  // Total log-likelihood of the training corpus before each M-step.
  const std::vector<double>& log_likelihoods() const noexcept { return log_likelihoods_; }

  // t(target | source). Tokens outside the training vocabularies get the
  // uniform value 1/|target vocabulary|.
  double translation_prob(std::string_view source, std::string_view target) const {
    const auto f = source_vocab_.find(text::to_lower(source));
    return lookup(f ? *f + 1 : kUnknown, target);
  }

  double null_translation_prob(std::string_view target) const { return lookup(0, target); }

  // Largest |sum_e t(e|f) - 1| over all source rows, the null row included.
  double max_row_sum_error() const {
    double worst = 0.0;
    for (const auto& row : rows_) {
      double sum = 0.0;
      for (double p : row.probs) sum += p;
      sum += static_cast<double>(target_vocab_.size() - row.targets.size()) * row.unseen;
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
  }

  std::string serialize() const {
    std::string out = "#idiom-align-model\tv1\n";
    out += "tension\t" + detail::format_double(options_.tension) + "\n";
    out += "null_prob\t" + detail::format_double(options_.null_prob) + "\n";
    out += "smoothing\t" + detail::format_double(options_.smoothing) + "\n";
    out += "iterations\t" + std::to_string(options_.iterations) + "\n";
    for (std::size_t k = 0; k < log_likelihoods_.size(); ++k)
      out += "loglik\t" + std::to_string(k + 1) + "\t" +
             detail::format_double(log_likelihoods_[k]) + "\n";
    for (std::uint32_t e = 0; e < target_vocab_.size(); ++e)
      out += "V\t" + target_vocab_.word(e) + "\n";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto& row = rows_[r];
      if (r == 0)
        out += "N\t" + detail::format_double(row.unseen) + "\n";
      else
        out += "R\t" + source_vocab_.word(static_cast<std::uint32_t>(r - 1)) + "\t" +
               detail::format_double(row.unseen) + "\n";
      for (std::size_t k = 0; k < row.targets.size(); ++k)
        out += "T\t" + std::to_string(row.targets[k]) + "\t" +
               detail::format_double(row.probs[k]) + "\n";
    }
    return out;
  }

  static AlignmentModel deserialize(const std::vector<std::string>& lines,
                                    const std::string& source = "model") {
    if (lines.empty() || lines[0] != "#idiom-align-model\tv1")
      throw DataError("not an alignment model: '" + source + "'", 1);
    AlignmentModel model;
    for (std::size_t n = 1; n < lines.size(); ++n) {
      if (lines[n].empty() || lines[n][0] == '#') continue;
      const auto f = tsv::split(lines[n]);
      const auto bad = [&] { return DataError("malformed model record in '" + source + "'", n + 1); };
      try {
        if (f[0] == "tension" && f.size() == 2) {
          model.options_.tension = std::stod(f[1]);
        } else if (f[0] == "null_prob" && f.size() == 2) {
          model.options_.null_prob = std::stod(f[1]);
        } else if (f[0] == "smoothing" && f.size() == 2) {
          model.options_.smoothing = std::stod(f[1]);
        } else if (f[0] == "iterations" && f.size() == 2) {
          model.options_.iterations = std::stoul(f[1]);
        } else if (f[0] == "loglik" && f.size() == 3) {
          model.log_likelihoods_.push_back(std::stod(f[2]));
        } else if (f[0] == "V" && f.size() == 2) {
          model.target_vocab_.add(f[1]);
        } else if (f[0] == "N" && f.size() == 2 && model.rows_.empty()) {
          model.rows_.push_back({{}, {}, std::stod(f[1])});
        } else if (f[0] == "R" && f.size() == 3 && !model.rows_.empty()) {
          if (model.source_vocab_.add(f[1]) + 1 != model.rows_.size()) throw bad();
          model.rows_.push_back({{}, {}, std::stod(f[2])});
        } else if (f[0] == "T" && f.size() == 3 && !model.rows_.empty()) {
          const auto e = static_cast<std::uint32_t>(std::stoul(f[1]));
          auto& row = model.rows_.back();
          if (e >= model.target_vocab_.size() || (!row.targets.empty() && row.targets.back() >= e))
            throw bad();
          row.targets.push_back(e);
          row.probs.push_back(std::stod(f[2]));
        } else {
          throw bad();
        }
      } catch (const std::logic_error&) {
        throw bad();
      }
    }
    if (model.rows_.empty()) throw DataError("alignment model has no null row: '" + source + "'");
    return model;
  }

 private:
  friend AlignmentModel train_aligner(const Bitext&, const AlignerOptions&);

  static constexpr std::uint32_t kUnknown = 0xFFFFFFFFu;

  struct Row {
    std::vector<std::uint32_t> targets;  // sorted target ids
    std::vector<double> probs;
    double unseen = 0.0;  // t for in-vocabulary targets never paired with this source
  };

  double uniform() const {
    return target_vocab_.size() ? 1.0 / static_cast<double>(target_vocab_.size()) : 1.0;
  }

  double lookup(std::uint32_t row_id, std::string_view target) const {
    const auto e = target_vocab_.find(text::to_lower(target));
    if (!e || row_id == kUnknown || row_id >= rows_.size()) return uniform();
    const auto& row = rows_[row_id];
    auto it = std::lower_bound(row.targets.begin(), row.targets.end(), *e);
    if (it != row.targets.end() && *it == *e) return row.probs[it - row.targets.begin()];
    return row.unseen;
  }

  AlignerOptions options_;
  detail::Vocabulary source_vocab_;  // row r holds source id r - 1; row 0 is null
  detail::Vocabulary target_vocab_;
  std::vector<Row> rows_;
  std::vector<double> log_likelihoods_;
};

// EM training. Each iteration records the corpus log-likelihood under the
// current parameters, then re-estimates t with add-alpha smoothing over the
// target vocabulary.
inline AlignmentModel train_aligner(const Bitext& bitext, const AlignerOptions& options = {}) {
  if (bitext.empty()) throw DataError("empty bitext");
  if (options.iterations == 0) throw UsageError("iterations must be positive");
  if (!(options.tension > 0.0)) throw UsageError("tension must be positive");
  if (!(options.null_prob >= 0.0 && options.null_prob < 1.0))
    throw UsageError("null probability must lie in [0, 1)");
  if (!(options.smoothing >= 0.0)) throw UsageError("smoothing must be non-negative");

  AlignmentModel model;
  model.options_ = options;

  struct Encoded {
    std::vector<std::uint32_t> source;  // row ids (source id + 1)
    std::vector<std::uint32_t> target;
  };
  std::vector<Encoded> corpus;
  corpus.reserve(bitext.size());
  for (std::size_t s = 0; s < bitext.size(); ++s) {
    const auto& pair = bitext[s];
    if (pair.source.empty() || pair.target.empty())
      throw DataError("zero-length sentence in bitext pair " + std::to_string(s + 1));
    Encoded enc;
    for (const auto& w : pair.source) enc.source.push_back(model.source_vocab_.add(text::to_lower(w)) + 1);
    for (const auto& w : pair.target) enc.target.push_back(model.target_vocab_.add(text::to_lower(w)));
    corpus.push_back(std::move(enc));
  }

  const std::size_t rows = model.source_vocab_.size() + 1;
  model.rows_.assign(rows, {});
  for (const auto& enc : corpus) {
    for (auto e : enc.target) {
      model.rows_[0].targets.push_back(e);
      for (auto f : enc.source) model.rows_[f].targets.push_back(e);
    }
  }
  const double vocab = static_cast<double>(model.target_vocab_.size());
  for (auto& row : model.rows_) {
    std::sort(row.targets.begin(), row.targets.end());
    row.targets.erase(std::unique(row.targets.begin(), row.targets.end()), row.targets.end());
    row.probs.assign(row.targets.size(), 1.0 / vocab);
    row.unseen = 1.0 / vocab;
  }

  // Position of target id within a row's sorted target list.
  const auto slot = [&](std::uint32_t f, std::uint32_t e) {
    const auto& t = model.rows_[f].targets;
    return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), e) - t.begin());
  };

  std::vector<std::vector<double>> counts(rows);
  std::vector<double> prior;
  std::vector<double> score;
  std::vector<std::size_t> slots;
  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    for (std::size_t r = 0; r < rows; ++r) counts[r].assign(model.rows_[r].targets.size(), 0.0);
    double log_likelihood = 0.0;

    for (const auto& enc : corpus) {
      const std::size_t n = enc.source.size();
      const std::size_t m = enc.target.size();
      prior.resize(n);
      score.resize(n);
      slots.resize(n);
      for (std::size_t j = 0; j < m; ++j) {
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          prior[i] = std::exp(-options.tension * diagonal_distance(i, n, j, m));
          z += prior[i];
        }
        const std::uint32_t e = enc.target[j];
        const std::size_t null_slot = slot(0, e);
        const double null_score = options.null_prob * model.rows_[0].probs[null_slot];
        double total = null_score;
        for (std::size_t i = 0; i < n; ++i) {
          const std::uint32_t f = enc.source[i];
          slots[i] = slot(f, e);
          score[i] = (1.0 - options.null_prob) * prior[i] / z * model.rows_[f].probs[slots[i]];
          total += score[i];
        }
        if (!(total > 0.0)) continue;
        log_likelihood += std::log(total);
        counts[0][null_slot] += null_score / total;
        for (std::size_t i = 0; i < n; ++i) counts[enc.source[i]][slots[i]] += score[i] / total;
      }
    }
    model.log_likelihoods_.push_back(log_likelihood);

    for (std::size_t r = 0; r < rows; ++r) {
      auto& row = model.rows_[r];
      double mass = 0.0;
      for (double c : counts[r]) mass += c;
      const double denom = mass + options.smoothing * vocab;
      if (!(denom > 0.0)) continue;
      for (std::size_t k = 0; k < row.probs.size(); ++k)
        row.probs[k] = (counts[r][k] + options.smoothing) / denom;
      row.unseen = options.smoothing / denom;
    }
  }
  return model;
}

// Per-target-token links: each target position aligns to at most one source
// position or to null.
class AlignmentLinks {
 public:
  AlignmentLinks() = default;
  AlignmentLinks(std::size_t source_length, std::size_t target_length)
      : source_length_(source_length), source_of_(target_length) {}

  std::size_t source_length() const noexcept { return source_length_; }
  std::size_t target_length() const noexcept { return source_of_.size(); }

  void link(std::size_t i, std::size_t j) {
    if (i >= source_length_ || j >= source_of_.size())
      throw DataError("alignment link " + std::to_string(i) + "-" + std::to_string(j) +
                      " out of bounds");
    source_of_[j] = i;
  }
  void unlink(std::size_t j) { source_of_.at(j).reset(); }
  std::optional<std::size_t> source_of(std::size_t j) const { return source_of_.at(j); }

  // Links sorted by (i, j).
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t j = 0; j < source_of_.size(); ++j)
      if (source_of_[j]) out.emplace_back(*source_of_[j], j);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::string to_pharaoh() const {
    std::string out;
    for (const auto& [i, j] : pairs()) {
      if (!out.empty()) out.push_back(' ');
      out += std::to_string(i) + "-" + std::to_string(j);
    }
    return out;
  }

  static AlignmentLinks from_pharaoh(std::string_view line, std::size_t source_length,
                                     std::size_t target_length) {
    AlignmentLinks links(source_length, target_length);
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && line[pos] == ' ') ++pos;
      if (pos >= line.size()) break;
      auto end = line.find(' ', pos);
      if (end == std::string_view::npos) end = line.size();
      const auto item = line.substr(pos, end - pos);
      const auto dash = item.find('-');
      if (dash == std::string_view::npos || dash == 0 || dash + 1 == item.size())
        throw DataError("malformed alignment pair '" + std::string(item) + "'");
      std::size_t i = 0, j = 0;
      try {
        std::size_t used = 0;
        i = std::stoul(std::string(item.substr(0, dash)), &used);
        if (used != dash) throw std::invalid_argument("i");
        j = std::stoul(std::string(item.substr(dash + 1)), &used);
        if (used != item.size() - dash - 1) throw std::invalid_argument("j");
      } catch (const std::logic_error&) {
        throw DataError("malformed alignment pair '" + std::string(item) + "'");
      }
      if (j < target_length && links.source_of_[j])
        throw DataError("target position " + std::to_string(j) + " aligned twice");
      links.link(i, j);
      pos = end;
    }
    return links;
  }

  bool operator==(const AlignmentLinks&) const = default;

 private:
  std::size_t source_length_ = 0;
  std::vector<std::optional<std::size_t>> source_of_;
};

inline AlignmentLinks viterbi_align(const AlignmentModel& model,
                                    const std::vector<std::string>& source,
                                    const std::vector<std::string>& target) {
  if (source.empty() || target.empty()) throw DataError("cannot align an empty sentence");
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  AlignmentLinks links(n, m);
  std::vector<double> prior(n);
  for (std::size_t j = 0; j < m; ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      prior[i] = std::exp(-model.tension() * diagonal_distance(i, n, j, m));
      z += prior[i];
    }
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = (1.0 - model.null_prob()) * prior[i] / z *
                       model.translation_prob(source[i], target[j]);
      // Scanning i upward, only a strictly higher score or an equal score
      // strictly closer to the diagonal replaces the incumbent.
      if (!best || s > best_score ||
          (s == best_score && diagonal_distance(i, n, j, m) < diagonal_distance(*best, n, j, m))) {
        best = i;
        best_score = s;
      }
    }
    const double null_score = model.null_prob() * model.null_translation_prob(target[j]);
    if (best && !(null_score > best_score)) links.link(*best, j);
  }
  return links;
}

// Re-links source words whose current link fails the synset test to a
// target word that passes it. Candidates j' must pass the test against the
// source lemma and be unlinked or hold a failing link; the best candidate
// maximizes t(e_j'|f_i), then minimizes |i/n - j'/m|, then j'. Failing
// links are visited once, in target order. Passing links are never touched.
inline AlignmentLinks refine_with_kb(const AlignmentLinks& links,
                                     const std::vector<std::string>& source, const Lang& source_lang,
                                     const std::vector<std::string>& target, const Lang& target_lang,
                                     const MultiWordnetIndex& index, const AlignmentModel& model,
                                     const MorphLexicon& lexicon) {
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  if (links.source_length() != n || links.target_length() != m)
    throw DataError("alignment does not match sentence lengths");
  std::vector<std::string> source_lemmas, target_lemmas;
  for (const auto& w : source) source_lemmas.push_back(analyze(w, source_lang, lexicon).lemma);
  for (const auto& w : target) target_lemmas.push_back(analyze(w, target_lang, lexicon).lemma);
  const auto passes = [&](std::size_t i, std::size_t j) {
    return lemmas_share_synset(index, source_lemmas[i], source_lang, target_lemmas[j], target_lang);
  };

  AlignmentLinks out = links;
  for (const auto& [i, j] : links.pairs()) {
    if (out.source_of(j) != i || passes(i, j)) continue;
    std::optional<std::size_t> best;
    double best_t = 0.0;
    for (std::size_t jp = 0; jp < m; ++jp) {
      if (jp == j || !passes(i, jp)) continue;
      const auto holder = out.source_of(jp);
      if (holder && passes(*holder, jp)) continue;
      const double t = model.translation_prob(source[i], target[jp]);
      if (!best || t > best_t ||
          (t == best_t && diagonal_distance(i, n, jp, m) < diagonal_distance(i, n, *best, m))) {
        best = jp;
        best_t = t;
      }
    }
    if (!best) continue;
    out.unlink(j);
    out.link(i, *best);
  }
  return out;
}

// Target tokens linked to source position i, in target order.
inline std::vector<std::string> targets_of_source(const AlignmentLinks& links, std::size_t i,
                                                  const std::vector<std::string>& target) {
  if (i >= links.source_length()) throw DataError("source index out of bounds");
  std::vector<std::string> out;
  for (std::size_t j = 0; j < links.target_length() && j < target.size(); ++j)
    if (links.source_of(j) == i) out.push_back(target[j]);
  return out;
}

// bitext.tsv: `source sentence<TAB>target sentence`, tokenized on load.
inline Bitext load_bitext(const std::string& path) {
  Bitext bitext;
  const auto lines = tsv::read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto f = tsv::split(lines[n]);
    if (f.size() != 2)
      throw DataError("expected 2 columns in '" + path + "'", n + 1);
    SentencePair pair{tokenize(f[0]), tokenize(f[1])};
    if (pair.source.empty() || pair.target.empty())
      throw DataError("zero-length sentence in '" + path + "'", n + 1);
    bitext.push_back(std::move(pair));
  }
  return bitext;
}

}  // namespace idiom
