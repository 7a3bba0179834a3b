#pragma once

// UNATT: an MWE attested in training with only one class is always given
// that class; otherwise no prediction.

#include <map>
#include <optional>
#include <string>

#include "idiom/corpus.hpp"
#include "idiom/prediction.hpp"

namespace idiom {

struct ClassCounts {
  std::size_t idiomatic = 0;
  std::size_t literal = 0;

  bool operator==(const ClassCounts&) const = default;
};

using UnattTable = std::map<std::string, ClassCounts>;

inline UnattTable build_unatt_table(const Dataset& train) {
  UnattTable table;
  for (const auto& inst : train.instances) {
    if (!inst.label) throw DataError("unlabeled training instance '" + inst.id + "'");
    auto& counts = table[normalize_mwe(inst.mwe)];
    (*inst.label == Label::Idiomatic ? counts.idiomatic : counts.literal) += 1;
  }
  return table;
}

inline std::optional<Label> unatt_label(const std::string& mwe, const UnattTable& table) {
  auto it = table.find(normalize_mwe(mwe));
  if (it == table.end()) return std::nullopt;
  const auto& c = it->second;
  if (c.idiomatic > 0 && c.literal == 0) return Label::Idiomatic;
  if (c.literal > 0 && c.idiomatic == 0) return Label::Literal;
  return std::nullopt;
}

inline std::optional<Prediction> classify_unatt(const Instance& instance, const UnattTable& table) {
  const auto label = unatt_label(instance.mwe, table);
  if (!label) return std::nullopt;
  const auto& c = table.at(normalize_mwe(instance.mwe));
  return Prediction{instance.id, *label, Method::Unatt,
                    "only " + std::string(to_string(*label)) + " attested (" +
                        std::to_string(c.idiomatic + c.literal) + ")"};
}

struct UnattScore {
  double precision = 0.0;  // 0 when UNATT never fires
  double recall = 0.0;     // correct / all eval instances
  std::size_t predicted = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
};

inline UnattScore unatt_precision_recall(const UnattTable& table, const Dataset& eval) {
  UnattScore score;
  for (const auto& inst : eval.instances) {
    if (!inst.label) throw DataError("unlabeled evaluation instance '" + inst.id + "'");
    ++score.total;
    const auto label = unatt_label(inst.mwe, table);
    if (!label) continue;
    ++score.predicted;
    if (*label == *inst.label) ++score.correct;
  }
  if (score.predicted)
    score.precision = static_cast<double>(score.correct) / static_cast<double>(score.predicted);
  if (score.total)
    score.recall = static_cast<double>(score.correct) / static_cast<double>(score.total);
  return score;
}

// Inspection dump: `mwe idiomatic_count literal_count`.
inline std::string format_unatt_table(const UnattTable& table) {
  std::string out;
  for (const auto& [mwe, c] : table)
    out += mwe + "\t" + std::to_string(c.idiomatic) + "\t" + std::to_string(c.literal) + "\n";
  return out;
}

}  // namespace idiom
