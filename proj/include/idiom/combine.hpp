#pragma once

#include <optional>
#include <string>
#include <utility>

#include "idiom/prediction.hpp"

namespace idiom {

// Agreement wins; disagreement yields `fallback_class`.
inline Prediction combine(const Prediction& a, const Prediction& b, Label fallback_class) {
  if (a.instance_id != b.instance_id)
    throw DataError("cannot combine predictions for '" + a.instance_id + "' and '" +
                    b.instance_id + "'");
  const bool agree = a.label == b.label;
  const Label label = agree ? a.label : fallback_class;
  // Sources listed in a canonical order so combine(a, b) == combine(b, a).
  const Prediction* first = &a;
  const Prediction* second = &b;
  if (std::pair(to_string(b.method), to_string(b.label)) <
      std::pair(to_string(a.method), to_string(a.label)))
    std::swap(first, second);
  std::string rationale = std::string(to_string(first->method)) + "=" +
                          std::string(to_string(first->label)) + " " +
                          std::string(to_string(second->method)) + "=" +
                          std::string(to_string(second->label));
  rationale += agree ? "; agreed" : "; default " + std::string(to_string(fallback_class));
  return {a.instance_id, label, Method::Combined, rationale};
}

inline Prediction overlay_unatt(const std::optional<Prediction>& unatt, const Prediction& fallback) {
  if (!unatt) return fallback;
  if (unatt->instance_id != fallback.instance_id)
    throw DataError("cannot overlay predictions for '" + unatt->instance_id + "' and '" +
                    fallback.instance_id + "'");
  return *unatt;
}

}  // namespace idiom
