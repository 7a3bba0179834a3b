#pragma once

// Macro F1 over {Idiomatic, Literal}, per language and pooled.
//
// Per-class F1 = 2TP / (2TP + FP + FN). A class with TP + FP + FN = 0 (absent
// from both gold and predictions) is left out of the mean; a class that
// occurs but is never predicted correctly scores 0.

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "idiom/corpus.hpp"
#include "idiom/prediction.hpp"

namespace idiom {

struct Confusion {
  // counts[gold][pred], indexed by Label.
  std::array<std::array<std::size_t, 2>, 2> counts{};

  void add(Label gold, Label pred) { ++counts[static_cast<int>(gold)][static_cast<int>(pred)]; }

  Confusion& operator+=(const Confusion& o) {
    for (int g = 0; g < 2; ++g)
      for (int p = 0; p < 2; ++p) counts[g][p] += o.counts[g][p];
    return *this;
  }

  std::size_t total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }

  std::optional<double> class_f1(Label label) const {
    const int c = static_cast<int>(label);
    const std::size_t tp = counts[c][c];
    const std::size_t fp = counts[1 - c][c];
    const std::size_t fn = counts[c][1 - c];
    if (tp + fp + fn == 0) return std::nullopt;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
  }

  double macro_f1() const {
    double sum = 0.0;
    int classes = 0;
    for (auto label : {Label::Idiomatic, Label::Literal}) {
      if (auto f1 = class_f1(label)) {
        sum += *f1;
        ++classes;
      }
    }
    return classes ? sum / classes : 0.0;
  }

  bool operator==(const Confusion&) const = default;
};

inline double macro_f1(const std::vector<Label>& golds, const std::vector<Label>& preds) {
  if (golds.size() != preds.size())
    throw DataError("gold and prediction lists differ in length (" +
                    std::to_string(golds.size()) + " vs " + std::to_string(preds.size()) + ")");
  if (golds.empty()) throw DataError("macro F1 of an empty list");
  Confusion c;
  for (std::size_t k = 0; k < golds.size(); ++k) c.add(golds[k], preds[k]);
  return c.macro_f1();
}

inline const std::string kPooled = "ALL";

struct ScoreReport {
  Setting setting = Setting::ZeroShot;
  std::string method;
  std::map<std::string, Confusion> by_language;  // language code -> confusion
  Confusion pooled;
  std::map<std::string, std::string> parameters;

  std::optional<double> language_f1(const std::string& code) const {
    if (code == kPooled) return pooled.macro_f1();
    auto it = by_language.find(code);
    if (it == by_language.end()) return std::nullopt;
    return it->second.macro_f1();
  }
};

// One prediction per gold instance; ALL is scored on the pooled instances.
inline ScoreReport score_report(const Dataset& gold, const std::vector<Prediction>& predictions,
                                Setting setting, std::string method = {}) {
  std::unordered_map<std::string, const Prediction*> by_id;
  std::set<std::string> methods;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.instance_id, &p).second)
      throw DataError("duplicate prediction for '" + p.instance_id + "'");
    methods.insert(std::string(to_string(p.method)));
  }
  ScoreReport report;
  report.setting = setting;
  if (method.empty())
    method = methods.size() == 1 ? *methods.begin() : methods.empty() ? "none" : "mixed";
  report.method = std::move(method);
  std::size_t matched = 0;
  for (const auto& inst : gold.instances) {
    if (!inst.label) throw DataError("unlabeled gold instance '" + inst.id + "'");
    auto it = by_id.find(inst.id);
    if (it == by_id.end()) throw DataError("no prediction for instance '" + inst.id + "'");
    ++matched;
    report.by_language[inst.language.code()].add(*inst.label, it->second->label);
    report.pooled.add(*inst.label, it->second->label);
  }
  if (matched != predictions.size()) {
    std::set<std::string> gold_ids;
    for (const auto& inst : gold.instances) gold_ids.insert(inst.id);
    for (const auto& p : predictions)
      if (!gold_ids.count(p.instance_id))
        throw DataError("prediction for unknown instance '" + p.instance_id + "'");
  }
  return report;
}

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {"EN", "PT", "GL", kPooled};
  return columns;
}

inline std::string format_percent(double value) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * value);
  return buf;
}

inline constexpr std::string_view kReportHeader = "setting\tmethod\tlanguage\tmacro_f1\tn";

// report.tsv rows: one per present language plus ALL; macro F1 in percent.
inline std::string format_report_tsv(const std::vector<ScoreReport>& reports,
                                     const std::vector<std::string>& comments = {}) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += std::string(kReportHeader) + "\n";
  for (const auto& r : reports) {
    for (const auto& code : report_columns()) {
      const auto f1 = r.language_f1(code);
      if (!f1) continue;
      const std::size_t n = code == kPooled ? r.pooled.total() : r.by_language.at(code).total();
      out += tsv::join({std::string(to_string(r.setting)), r.method, code, format_percent(*f1),
                        std::to_string(n)}) +
             "\n";
    }
  }
  return out;
}

// Fixed-width table: one row per method, EN/PT/GL/ALL columns per setting.
inline std::string render_table(const std::vector<ScoreReport>& reports) {
  std::vector<Setting> settings;
  std::vector<std::string> methods;
  for (const auto& r : reports) {
    if (std::find(settings.begin(), settings.end(), r.setting) == settings.end())
      settings.push_back(r.setting);
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
  }
  std::sort(settings.begin(), settings.end());

  std::size_t method_width = 6;
  for (const auto& m : methods) method_width = std::max(method_width, m.size());
  const auto pad = [](std::string s, std::size_t width, bool right) {
    if (s.size() >= width) return s;
    return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
  };
  constexpr std::size_t kCell = 7;
  const std::size_t block = kCell * report_columns().size();

  std::string out = pad("", method_width, false);
  for (auto s : settings) out += " |" + pad(std::string(to_string(s)), block, true);
  out += "\n" + pad("method", method_width, false);
  for (std::size_t k = 0; k < settings.size(); ++k) {
    out += " |";
    for (const auto& code : report_columns()) out += pad(code, kCell, true);
  }
  out += "\n" + std::string(out.find('\n'), '-') + "\n";
  for (const auto& m : methods) {
    out += pad(m, method_width, false);
    for (auto s : settings) {
      out += " |";
      const ScoreReport* found = nullptr;
      for (const auto& r : reports)
        if (r.method == m && r.setting == s) found = &r;
      for (const auto& code : report_columns()) {
        std::optional<double> f1;
        if (found) f1 = found->language_f1(code);
        out += pad(f1 ? format_percent(*f1) : "-", kCell, true);
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace idiom
