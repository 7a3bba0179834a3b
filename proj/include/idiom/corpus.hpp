#pragma once

// MWE-in-context instances: data model, instances.tsv I/O and split checks.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "idiom/common.hpp"
#include "idiom/morph.hpp"

namespace idiom {

// Literal means compositional; proper-noun MWEs are Literal by convention.
enum class Label { Idiomatic, Literal };

inline std::string_view to_string(Label label) {
  return label == Label::Idiomatic ? "idiomatic" : "literal";
}

inline Label parse_label(std::string_view s) {
  const auto lowered = text::to_lower(s);
  if (lowered == "idiomatic") return Label::Idiomatic;
  if (lowered == "literal") return Label::Literal;
  throw DataError("unknown label '" + std::string(s) + "'");
}

inline Label opposite(Label label) {
  return label == Label::Idiomatic ? Label::Literal : Label::Idiomatic;
}

struct Instance {
  std::string id;
  Lang language;
  std::string mwe;
  std::string prev;
  std::string target;
  std::string next;
  std::optional<Label> label;

  bool operator==(const Instance&) const = default;
};

enum class Setting { ZeroShot, OneShot };
enum class Split { Train, Dev, Test };

inline std::string_view to_string(Setting s) {
  return s == Setting::ZeroShot ? "zero-shot" : "one-shot";
}

inline Setting parse_setting(std::string_view s) {
  const auto lowered = text::to_lower(s);
  if (lowered == "zero-shot" || lowered == "zeroshot") return Setting::ZeroShot;
  if (lowered == "one-shot" || lowered == "oneshot") return Setting::OneShot;
  throw UsageError("unknown setting '" + std::string(s) + "'");
}

struct Dataset {
  std::vector<Instance> instances;
  Setting setting = Setting::ZeroShot;
  Split split = Split::Train;
};

inline std::string normalize_mwe(std::string_view mwe) { return text::normalize(mwe); }

// Index of the first token of the first case-insensitive contiguous
// occurrence of `mwe` in `sentence`, both tokenized by `tokenize`.
inline std::optional<std::size_t> locate_mwe(std::string_view mwe, std::string_view sentence) {
  std::vector<std::string> needle;
  for (const auto& t : tokenize(mwe)) needle.push_back(text::to_lower(t));
  std::vector<std::string> haystack;
  for (const auto& t : tokenize(sentence)) haystack.push_back(text::to_lower(t));
  if (needle.empty() || needle.size() > haystack.size()) return std::nullopt;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end());
  if (it == haystack.end()) return std::nullopt;
  return static_cast<std::size_t>(it - haystack.begin());
}

inline constexpr std::string_view kInstancesHeader = "id\tlanguage\tmwe\tprev\ttarget\tnext\tlabel";

// Parses instances.tsv. Row numbers in errors are 1-based file lines.
inline Dataset parse_instances(const std::vector<std::string>& lines, bool require_labels,
                               const std::string& source = "instances") {
  Dataset dataset;
  if (lines.empty()) throw DataError("missing header in '" + source + "'", 1);
  if (lines[0] != kInstancesHeader)
    throw DataError("unexpected header in '" + source + "'", 1);
  std::unordered_set<std::string> seen;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t row = n + 1;
    if (lines[n].empty() && n + 1 == lines.size()) break;
    const auto fields = tsv::split(lines[n]);
    if (fields.size() != 7)
      throw DataError("expected 7 columns, found " + std::to_string(fields.size()), row);
    Instance inst;
    inst.id = fields[0];
    if (inst.id.empty()) throw DataError("empty id", row);
    try {
      inst.language = Lang(fields[1]);
    } catch (const DataError&) {
      throw DataError("unknown language code '" + fields[1] + "'", row);
    }
    if (!is_instance_language(inst.language))
      throw DataError("unknown language code '" + fields[1] + "'", row);
    inst.mwe = fields[2];
    inst.prev = fields[3];
    inst.target = fields[4];
    inst.next = fields[5];
    if (!fields[6].empty()) {
      try {
        inst.label = parse_label(fields[6]);
      } catch (const DataError& e) {
        throw DataError(e.what(), row);
      }
    } else if (require_labels) {
      throw DataError("missing label for '" + inst.id + "'", row);
    }
    if (!seen.insert(inst.id).second) throw DataError("duplicate id '" + inst.id + "'", row);
    if (tokenize(inst.mwe).empty()) throw DataError("empty mwe for '" + inst.id + "'", row);
    if (inst.target.empty()) throw DataError("empty target sentence for '" + inst.id + "'", row);
    if (!locate_mwe(inst.mwe, inst.target))
      throw DataError("mwe '" + inst.mwe + "' not found in target sentence of '" + inst.id + "'",
                      row);
    dataset.instances.push_back(std::move(inst));
  }
  return dataset;
}

inline Dataset load_instances(const std::string& path, bool require_labels) {
  return parse_instances(tsv::read_lines(path), require_labels, path);
}

inline std::string format_instances(const Dataset& dataset) {
  std::string out(kInstancesHeader);
  out.push_back('\n');
  for (const auto& inst : dataset.instances) {
    for (const auto* f : {&inst.id, &inst.mwe, &inst.prev, &inst.target, &inst.next})
      tsv::check_field(*f, "instance field");
    out += tsv::join({inst.id, inst.language.code(), inst.mwe, inst.prev, inst.target, inst.next,
                      inst.label ? std::string(to_string(*inst.label)) : std::string()});
    out.push_back('\n');
  }
  return out;
}

inline void save_instances(const std::string& path, const Dataset& dataset) {
  tsv::write_file(path, format_instances(dataset));
}

// Normalized MWEs present in both datasets, sorted. Empty means the
// zero-shot contract holds.
inline std::vector<std::string> check_zero_shot_disjointness(const Dataset& train,
                                                             const Dataset& eval) {
  std::set<std::string> train_mwes;
  for (const auto& inst : train.instances) train_mwes.insert(normalize_mwe(inst.mwe));
  std::set<std::string> overlap;
  for (const auto& inst : eval.instances) {
    auto key = normalize_mwe(inst.mwe);
    if (train_mwes.count(key)) overlap.insert(std::move(key));
  }
  return {overlap.begin(), overlap.end()};
}

}  // namespace idiom
