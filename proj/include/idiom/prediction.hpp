#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "idiom/common.hpp"
#include "idiom/corpus.hpp"

namespace idiom {

enum class Method { MTOne, MTAll, Unatt, Combined, GlossNeural, Baseline };

inline std::string_view to_string(Method method) {
  switch (method) {
    case Method::MTOne: return "MTOne";
    case Method::MTAll: return "MTAll";
    case Method::Unatt: return "Unatt";
    case Method::Combined: return "Combined";
    case Method::GlossNeural: return "GlossNeural";
    case Method::Baseline: return "Baseline";
  }
  return "Baseline";
}

inline Method parse_method(std::string_view s) {
  for (auto m : {Method::MTOne, Method::MTAll, Method::Unatt, Method::Combined,
                 Method::GlossNeural, Method::Baseline})
    if (s == to_string(m)) return m;
  throw DataError("unknown method '" + std::string(s) + "'");
}

struct Prediction {
  std::string instance_id;
  Label label = Label::Literal;
  Method method = Method::Baseline;
  std::string rationale;

  bool operator==(const Prediction&) const = default;
};

inline constexpr std::string_view kPredictionsHeader = "instance_id\tlabel\tmethod\trationale";

// predictions.tsv: optional `#` comment lines, the header, then one row per
// prediction.
inline std::string format_predictions(const std::vector<Prediction>& predictions,
                                      const std::vector<std::string>& comments = {}) {
  std::string out;
  for (const auto& c : comments) {
    tsv::check_field(c, "comment");
    out += "# " + c + "\n";
  }
  out += std::string(kPredictionsHeader) + "\n";
  for (const auto& p : predictions) {
    tsv::check_field(p.instance_id, "instance id");
    tsv::check_field(p.rationale, "rationale");
    out += tsv::join({p.instance_id, std::string(to_string(p.label)),
                      std::string(to_string(p.method)), p.rationale}) +
           "\n";
  }
  return out;
}

inline std::vector<Prediction> parse_predictions(const std::vector<std::string>& lines,
                                                 const std::string& source = "predictions") {
  std::vector<Prediction> out;
  std::unordered_set<std::string> seen;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto& line = lines[n];
    if (line.empty() || line[0] == '#' || line == kPredictionsHeader) continue;
    const auto f = tsv::split(line);
    if (f.size() != 3 && f.size() != 4)
      throw DataError("expected 4 columns in '" + source + "'", n + 1);
    try {
      Prediction p{f[0], parse_label(f[1]), parse_method(f[2]), f.size() == 4 ? f[3] : ""};
      if (!seen.insert(p.instance_id).second)
        throw DataError("duplicate prediction for '" + p.instance_id + "'");
      out.push_back(std::move(p));
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " in '" + source + "'", n + 1);
    }
  }
  return out;
}

inline std::vector<Prediction> load_predictions(const std::string& path) {
  return parse_predictions(tsv::read_lines(path), path);
}

}  // namespace idiom
