#include <gtest/gtest.h>

#include "idiom/eval.hpp"
#include "support/fixture.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace idiom;
using namespace idiom::testing;

namespace {

constexpr Label I = Label::Idiomatic;
constexpr Label L = Label::Literal;

std::vector<Label> random_labels(Rng& rng, std::size_t n, double p_idiomatic = 0.5) {
  std::vector<Label> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(coin(rng, p_idiomatic) ? I : L);
  return out;
}

// Gold dataset and predictions over `langs`, one random label pair per instance.
std::pair<Dataset, std::vector<Prediction>> random_run(Rng& rng, const std::vector<Lang>& langs,
                                                       std::size_t n) {
  Dataset gold;
  std::vector<Prediction> preds;
  for (std::size_t k = 0; k < n; ++k) {
    const auto id = "g" + std::to_string(k);
    gold.instances.push_back({id, pick(rng, langs), "a b", "", "a b", "", coin(rng) ? I : L});
    preds.push_back({id, coin(rng) ? I : L, Method::MTAll, ""});
  }
  return {gold, preds};
}

}  // namespace

TEST(MacroF1, HandComputedExample) {
  // Class I: P=1, R=1/2, F1=2/3. Class L: P=2/3, R=1, F1=4/5.
  EXPECT_NEAR(macro_f1({I, I, L, L}, {I, L, L, L}), (2.0 / 3.0 + 0.8) / 2.0, 1e-9);
  EXPECT_NEAR(macro_f1({I, I, L, L}, {I, L, L, L}), 0.7333333333333333, 1e-9);
}

TEST(MacroF1, PerfectAndInverted) {
  EXPECT_EQ(macro_f1({I, L, I, L}, {I, L, I, L}), 1.0);
  EXPECT_EQ(macro_f1({I, L, I, L}, {L, I, L, I}), 0.0);
}

TEST(MacroF1, AbsentClassIsExcluded) {
  // Only Literal occurs anywhere: the mean is over Literal alone.
  EXPECT_EQ(macro_f1({L, L}, {L, L}), 1.0);
  // Idiomatic is predicted but never gold: it scores 0 and counts.
  EXPECT_NEAR(macro_f1({L, L}, {I, L}), (0.0 + 2.0 / 3.0) / 2.0, 1e-12);
}

TEST(MacroF1, Errors) {
  EXPECT_THROW(macro_f1({I}, {}), DataError);
  EXPECT_THROW(macro_f1({}, {}), DataError);
}

TEST(MacroF1, MatchesPrecisionRecallOracle) {
  Rng rng(10);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = uniform(rng, 1, 30);
    const auto gold = random_labels(rng, n, std::uniform_real_distribution<double>(0, 1)(rng));
    const auto pred = random_labels(rng, n, std::uniform_real_distribution<double>(0, 1)(rng));
    EXPECT_NEAR(macro_f1(gold, pred), ref_macro_f1(gold, pred), 1e-12);
  }
}

TEST(MacroF1, InvariantUnderRelabeling) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = uniform(rng, 1, 25);
    auto gold = random_labels(rng, n);
    auto pred = random_labels(rng, n);
    const double before = macro_f1(gold, pred);
    for (auto& l : gold) l = opposite(l);
    for (auto& l : pred) l = opposite(l);
    EXPECT_NEAR(macro_f1(gold, pred), before, 1e-12);
  }
}

TEST(Report, SingleLanguageEqualsAll) {
  Rng rng(12);
  const auto [gold, preds] = random_run(rng, {kPortuguese}, 30);
  const auto r = score_report(gold, preds, Setting::OneShot);
  EXPECT_EQ(r.language_f1("PT"), r.language_f1(kPooled));
  EXPECT_FALSE(r.language_f1("EN"));
  EXPECT_EQ(r.method, "MTAll");
}

TEST(Report, PooledEqualsMergedConfusion) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [gold, preds] = random_run(rng, {kEnglish, kPortuguese, kGalician}, uniform(rng, 1, 60));
    const auto r = score_report(gold, preds, Setting::ZeroShot);
    Confusion merged;
    for (const auto& [code, c] : r.by_language) merged += c;
    EXPECT_EQ(merged, r.pooled);
    EXPECT_EQ(r.language_f1(kPooled), merged.macro_f1());
    // And from the raw lists, independently of Confusion.
    std::vector<Label> g, p;
    for (std::size_t k = 0; k < preds.size(); ++k) {
      g.push_back(*gold.instances[k].label);
      p.push_back(preds[k].label);
    }
    EXPECT_NEAR(*r.language_f1(kPooled), ref_macro_f1(g, p), 1e-12);
  }
}

TEST(Report, MissingOrUnknownPredictions) {
  Rng rng(14);
  auto [gold, preds] = random_run(rng, {kEnglish}, 5);
  auto fewer = preds;
  fewer.pop_back();
  EXPECT_THROW(score_report(gold, fewer, Setting::ZeroShot), DataError);
  auto extra = preds;
  extra.push_back({"nope", I, Method::MTAll, ""});
  EXPECT_THROW(score_report(gold, extra, Setting::ZeroShot), DataError);
  auto dup = preds;
  dup.push_back(preds[0]);
  EXPECT_THROW(score_report(gold, dup, Setting::ZeroShot), DataError);
}

TEST(Report, MethodNaming) {
  Rng rng(15);
  auto [gold, preds] = random_run(rng, {kEnglish}, 4);
  preds[0].method = Method::Unatt;
  EXPECT_EQ(score_report(gold, preds, Setting::ZeroShot).method, "mixed");
  EXPECT_EQ(score_report(gold, preds, Setting::ZeroShot, "MT+UNATT").method, "MT+UNATT");
}

TEST(Report, TsvAndTable) {
  Rng rng(16);
  std::vector<ScoreReport> reports;
  for (auto setting : {Setting::ZeroShot, Setting::OneShot}) {
    auto [gold, preds] = random_run(rng, {kEnglish, kPortuguese, kGalician}, 40);
    for (auto& p : preds) p.label = *gold.instances[&p - preds.data()].label;  // perfect
    reports.push_back(score_report(gold, preds, setting));
  }
  const auto tsv = format_report_tsv(reports, {"idiom evaluate"});
  EXPECT_EQ(tsv.rfind("# idiom evaluate\n" + std::string(kReportHeader) + "\n", 0), 0u);
  EXPECT_NE(tsv.find("zero-shot\tMTAll\tALL\t100.0\t40\n"), std::string::npos);
  EXPECT_NE(tsv.find("one-shot\tMTAll\tGL\t100.0\t"), std::string::npos);

  const auto table = render_table(reports);
  // Header, column names, rule, one row: 8 score columns.
  std::vector<std::string> rows;
  std::size_t pos = 0;
  while (pos < table.size()) {
    const auto nl = table.find('\n', pos);
    rows.push_back(table.substr(pos, nl - pos));
    pos = nl + 1;
  }
  ASSERT_EQ(rows.size(), 4u);
  std::size_t cells = 0;
  for (std::size_t p = rows[3].find("100.0"); p != std::string::npos; p = rows[3].find("100.0", p + 1)) ++cells;
  EXPECT_EQ(cells, 8u);
  EXPECT_NE(rows[0].find("zero-shot"), std::string::npos);
  EXPECT_NE(rows[0].find("one-shot"), std::string::npos);
  for (const char* col : {"EN", "PT", "GL", "ALL"}) EXPECT_NE(rows[1].find(col), std::string::npos);
}

TEST(Report, TableMarksMissingCells) {
  Rng rng(17);
  auto [gold, preds] = random_run(rng, {kEnglish}, 10);
  const auto table = render_table({score_report(gold, preds, Setting::ZeroShot)});
  EXPECT_NE(table.find(" -"), std::string::npos);
}

TEST(Report, PercentFormatting) {
  EXPECT_EQ(format_percent(0.7333333), "73.3");
  EXPECT_EQ(format_percent(1.0), "100.0");
  EXPECT_EQ(format_percent(0.0), "0.0");
}

TEST(Predictions, RoundTripAndErrors) {
  std::vector<Prediction> preds = {{"a", I, Method::MTOne, "wedding literal [matrimonio]"},
                                   {"b", L, Method::Combined, ""}};
  const auto text = format_predictions(preds, {"idiom classify", "param method=mt-one"});
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  EXPECT_EQ(parse_predictions(lines), preds);
  EXPECT_THROW(parse_predictions({"a\tliteral"}), DataError);
  EXPECT_THROW(parse_predictions({"a\tliteral\tMTAll", "a\tliteral\tMTAll"}), DataError);
  EXPECT_THROW(parse_predictions({"a\tliteral\tGuess"}), DataError);
  EXPECT_THROW(format_predictions({{"a\tb", I, Method::MTOne, ""}}), DataError);
}
