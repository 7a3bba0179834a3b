#include <gtest/gtest.h>

#include "idiom/lexkb.hpp"
#include "support/fixture.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace idiom;
using namespace idiom::testing;

namespace {

struct Probe {
  std::string lemma_a, lang_a, lemma_b, lang_b;
};

std::vector<Probe> random_probes(Rng& rng, std::size_t count) {
  std::vector<Probe> out;
  for (std::size_t k = 0; k < count; ++k) {
    const auto& la = pick(rng, kb_languages());
    const auto& lb = pick(rng, kb_languages());
    // Smaller pool than the generator's so hits are common; "zz" lemmas are absent.
    out.push_back({coin(rng, 0.05) ? "zz" : random_lemma(rng, la, 30), la,
                   random_lemma(rng, lb, 30), lb});
  }
  return out;
}

}  // namespace

TEST(KnowledgeBase, WeddingMatrimonio) {
  TempDir dir;
  write_text(dir.path() / "s.tsv", "s1\tEN\twedding\ns1\tIT\tmatrimonio\n");
  MultiWordnetIndex index;
  const auto report = index.load_kb("bn", dir.file("s.tsv"));
  EXPECT_EQ(report.synsets, 1u);
  EXPECT_EQ(report.members, 2u);
  EXPECT_TRUE(index.shares_synset("wedding", kEnglish, "matrimonio", kItalian));
  EXPECT_TRUE(index.shares_synset("Wedding", kEnglish, " matrimonio", kItalian));
  EXPECT_FALSE(index.shares_synset("zzzz", kEnglish, "matrimonio", kItalian));
  EXPECT_FALSE(index.shares_synset("wedding", kEnglish, "matrimonio", kPortuguese));
}

TEST(KnowledgeBase, EmptyFile) {
  TempDir dir;
  write_text(dir.path() / "s.tsv", "");
  KbLoadReport report;
  const auto kb = read_knowledge_base("x", dir.file("s.tsv"), std::nullopt, &report);
  EXPECT_EQ(kb.synset_count(), 0u);
  EXPECT_EQ(report.members, 0u);
  EXPECT_EQ(report.glosses, 0u);
}

TEST(KnowledgeBase, DuplicatesWarnAndErrorsCarryRows) {
  TempDir dir;
  write_text(dir.path() / "s.tsv", "s1\tEN\tbook\ns1\tEN\tBook\n");
  write_text(dir.path() / "g.tsv", "s1\tEN\tone\ns1\tEN\ttwo\n");
  KbLoadReport report;
  const auto kb = read_knowledge_base("x", dir.file("s.tsv"), dir.file("g.tsv"), &report);
  EXPECT_EQ(report.members, 1u);
  EXPECT_EQ(report.warnings.size(), 2u);
  EXPECT_EQ(kb.find("s1")->glosses.at(kEnglish), "one");

  write_text(dir.path() / "g2.tsv", "s1\tEN\tok\ns9\tEN\torphan\n");
  try {
    read_knowledge_base("x", dir.file("s.tsv"), dir.file("g2.tsv"));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  write_text(dir.path() / "s3.tsv", "s1\tEN\n");
  EXPECT_THROW(read_knowledge_base("x", dir.file("s3.tsv"), std::nullopt), DataError);
  write_text(dir.path() / "s4.tsv", "s1\tE1\tbook\n");
  EXPECT_THROW(read_knowledge_base("x", dir.file("s4.tsv"), std::nullopt), DataError);
}

TEST(KnowledgeBase, FishGlossesInSynsetOrder) {
  MultiWordnetIndex index;
  index.load_kb("bn", fixture("bn-synsets.tsv"), fixture("bn-glosses.tsv"));
  EXPECT_EQ(index.glosses_for("fish", kEnglish, kEnglish),
            (std::vector<std::string>{"any of various mostly cold-blooded aquatic vertebrates",
                                      "the flesh of fish used as food"}));
  EXPECT_TRUE(index.glosses_for("zzzz", kEnglish, kEnglish).empty());
}

TEST(KnowledgeBase, UnionAcrossKnowledgeBases) {
  MultiWordnetIndex index;
  index.load_kb("bn", fixture("bn-synsets.tsv"), fixture("bn-glosses.tsv"));
  EXPECT_FALSE(index.shares_synset("life preserver", kEnglish, "salvagente", kItalian));
  index.load_kb("omw", fixture("omw-synsets.tsv"), fixture("omw-glosses.tsv"));
  EXPECT_TRUE(index.shares_synset("life preserver", kEnglish, "salvagente", kItalian));
  EXPECT_TRUE(index.shares_synset_in("omw", "vest", kEnglish, "giubbotto", kItalian));
  EXPECT_FALSE(index.shares_synset_in("bn", "vest", kEnglish, "giubbotto", kItalian));
  EXPECT_THROW(index.shares_synset_in("wn", "a", kEnglish, "b", kItalian), UsageError);
  EXPECT_THROW(index.load_kb("bn", fixture("bn-synsets.tsv")), DataError);
  // Knowledge base load order first, then synset id order.
  EXPECT_EQ(index.glosses_for("story", kEnglish, kEnglish).size(), 2u);
}

TEST(KnowledgeBase, GalicianQueriedAsPortuguese) {
  MultiWordnetIndex index;
  index.load_kb("bn", fixture("bn-synsets.tsv"));
  // "grande" is only listed for GL in one synset and PT in the same; "pão" only for PT.
  EXPECT_FALSE(index.shares_synset("pão", kGalician, "bread", kEnglish));
  EXPECT_TRUE(lemmas_share_synset(index, "pão", kGalician, "bread", kEnglish));
  EXPECT_TRUE(lemmas_share_synset(index, "auga", kGalician, "water", kEnglish));
  EXPECT_FALSE(lemmas_share_synset(index, "pão", kPortuguese, "water", kEnglish));
}

TEST(KnowledgeBase, AgreesWithBruteForce) {
  Rng rng(2024);
  std::vector<RandomKb> specs = {random_kb(rng, "bn", 120), random_kb(rng, "omw", 80)};
  MultiWordnetIndex index;
  for (const auto& s : specs) {
    auto kb = build_kb(s);
    EXPECT_TRUE(kb.index_consistent());
    index.add(std::move(kb));
  }
  std::size_t hits = 0;
  for (const auto& p : random_probes(rng, 1000)) {
    const bool expected = brute_shares(specs, p.lemma_a, p.lang_a, p.lemma_b, p.lang_b);
    hits += expected;
    ASSERT_EQ(index.shares_synset(p.lemma_a, Lang(p.lang_a), p.lemma_b, Lang(p.lang_b)), expected)
        << p.lemma_a << "/" << p.lang_a << " vs " << p.lemma_b << "/" << p.lang_b;
  }
  EXPECT_GT(hits, 20u);  // the probe set must exercise both outcomes
}

TEST(KnowledgeBase, SymmetricAndMonotoneUnderUnion) {
  Rng rng(99);
  const auto a = random_kb(rng, "a", 60);
  const auto b = random_kb(rng, "b", 60);
  MultiWordnetIndex only_a, both;
  only_a.add(build_kb(a));
  both.add(build_kb(a));
  both.add(build_kb(b));
  for (const auto& p : random_probes(rng, 1000)) {
    const Lang la(p.lang_a), lb(p.lang_b);
    EXPECT_EQ(both.shares_synset(p.lemma_a, la, p.lemma_b, lb),
              both.shares_synset(p.lemma_b, lb, p.lemma_a, la));
    if (only_a.shares_synset(p.lemma_a, la, p.lemma_b, lb)) {
      EXPECT_TRUE(both.shares_synset(p.lemma_a, la, p.lemma_b, lb));
    }
  }
}

TEST(KnowledgeBase, SnapshotRoundTrip) {
  Rng rng(7);
  const auto spec = random_kb(rng, "rt", 150);
  const auto kb = build_kb(spec);
  TempDir dir;
  write_text(dir.path() / "rt.kb", kb.snapshot());
  const auto back = read_kb_snapshot(dir.file("rt.kb"));
  EXPECT_EQ(back.name(), "rt");
  EXPECT_EQ(back.snapshot(), kb.snapshot());
  EXPECT_TRUE(back.index_consistent());

  MultiWordnetIndex x, y;
  x.add(kb);
  y.add(back);
  for (const auto& p : random_probes(rng, 1000)) {
    const Lang la(p.lang_a), lb(p.lang_b);
    EXPECT_EQ(x.shares_synset(p.lemma_a, la, p.lemma_b, lb), y.shares_synset(p.lemma_a, la, p.lemma_b, lb));
    EXPECT_EQ(x.glosses_for(p.lemma_a, la, kEnglish), y.glosses_for(p.lemma_a, la, kEnglish));
  }
}

TEST(KnowledgeBase, GlossCoverageMatchesScan) {
  Rng rng(13);
  const auto spec = random_kb(rng, "g", 200);
  MultiWordnetIndex index;
  index.add(build_kb(spec));
  // For every member lemma: number of distinct glosses in language L over its synsets.
  for (const auto& lang : kb_languages()) {
    for (const auto& r : spec.members) {
      std::set<std::string> synsets;
      for (const auto& q : spec.members)
        if (q.lang == r.lang && ref_normalize(q.lemma) == ref_normalize(r.lemma)) synsets.insert(q.synset);
      std::set<std::string> glosses;
      for (const auto& g : spec.glosses)
        if (g.lang == lang && synsets.count(g.synset)) glosses.insert(g.lemma);
      EXPECT_EQ(index.glosses_for(r.lemma, Lang(r.lang), Lang(lang)).size(), glosses.size());
    }
  }
}

TEST(KnowledgeBase, SnapshotRejectsGarbage) {
  TempDir dir;
  write_text(dir.path() / "x.kb", "hello\n");
  EXPECT_THROW(read_kb_snapshot(dir.file("x.kb")), DataError);
  write_text(dir.path() / "y.kb", "#idiom-kb\ty\nQ\ts\tEN\tx\n");
  try {
    read_kb_snapshot(dir.file("y.kb"));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
}
