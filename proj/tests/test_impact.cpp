#include <doctest.h>

#include <fmt/format.h>

#include <random>

#include "citenet/impact.hpp"
#include "fixture.hpp"

using namespace citenet;

namespace {

// Journal T with `papers` papers spread over 2014-2015 and `citations`
// citations made to them in 2016 from journal S.
Corpus impact_fixture(int papers, int citations) {
  fixture::Tiny t;
  t.journal("T", "P").journal("S", "Q");
  std::vector<std::string> ids;
  for (int i = 0; i < papers; ++i) {
    ids.push_back(fmt::format("t{}", i));
    t.paper(ids.back(), "T", 2014 + i % 2);
  }
  for (int c = 0; c < citations; ++c) t.paper(fmt::format("s{}", c), "S", 2016, {ids[c % papers]});
  t.paper("late", "T", 2016);
  return t.build();
}

}  // namespace

TEST_CASE("impact factor") {
  auto ten = impact_fixture(5, 10);
  const auto t = *ten.find_journal("T");
  auto r = journal_impact(ten, t, 2016);
  REQUIRE(r);
  CHECK(r->numerator == 10);
  CHECK(r->denominator == 5);
  CHECK(r->value() == doctest::Approx(2.0));

  auto none = impact_fixture(5, 0);
  CHECK(journal_impact(none, t, 2016)->value() == 0.0);
  CHECK_FALSE(journal_impact(none, t, 2013));
}

TEST_CASE("citations outside the target year or to older papers do not count") {
  const auto corpus = fixture::Tiny{}
                          .journal("T")
                          .journal("S")
                          .paper("old", "T", 2013)
                          .paper("a", "T", 2014)
                          .paper("x", "S", 2016, {"old", "a"})
                          .paper("y", "S", 2017, {"a"})
                          .build();
  const auto r = journal_impact(corpus, *corpus.find_journal("T"), 2016);
  CHECK(r->numerator == 1);
  CHECK(r->denominator == 1);
}

TEST_CASE("citation normalization") {
  NormalizationTable table;
  table.reference_year = 2017;
  table.top_field_articles = {{2017, 1000.0}, {2010, 500.0}};
  CHECK(normalize_citations(10, 2017, table) == 10.0);
  CHECK(normalize_citations(10, 2010, table) == 20.0);
  CHECK(normalize_citations(0, 2010, table) == 0.0);
  CHECK_THROWS_AS(normalize_citations(10, 1999, table), Error);
}

TEST_CASE("normalization table picks the most-cited field") {
  const auto corpus = fixture::Tiny{}
                          .journal("A", "P", {"10"})
                          .journal("B", "P", {"20"})
                          .paper("a1", "A", 2016)
                          .paper("b1", "B", 2016)
                          .paper("b2", "B", 2016)
                          .paper("c1", "A", 2017, {"b1"})
                          .paper("c2", "A", 2017, {"b2", "a1"})
                          .paper("c3", "B", 2017, {"b1"})
                          .build();
  const auto table = NormalizationTable::from_corpus(corpus, 2017);
  CHECK(table.field == "20");
  CHECK(table.top_field_articles.at(2016) == 2.0);
  CHECK(table.top_field_articles.at(2017) == 1.0);
  const auto dir = fixture::scratch_dir("impact_table");
  table.save(dir / "n.csv");
  const auto back = NormalizationTable::load(dir / "n.csv");
  CHECK(back.reference_year == 2017);
  CHECK(back.top_field_articles == table.top_field_articles);
}

TEST_CASE("immediacy index") {
  fixture::Tiny t;
  t.journal("T").journal("S");
  for (int i = 0; i < 4; ++i) t.paper(fmt::format("t{}", i), "T", 2016);
  for (int c = 0; c < 6; ++c) t.paper(fmt::format("s{}", c), "S", 2016, {fmt::format("t{}", c % 4)});
  const auto corpus = t.build();
  const auto T = *corpus.find_journal("T");
  CHECK(*immediacy_index(corpus, T, 2016) == doctest::Approx(1.5));
  CHECK_FALSE(immediacy_index(corpus, T, 2015));
  const auto quiet = fixture::Tiny{}.journal("T").paper("a", "T", 2016).paper("b", "T", 2016).build();
  CHECK(*immediacy_index(quiet, 0, 2016) == 0.0);
}

TEST_CASE("half-lives") {
  // ages of citations to the 2010 paper: 1, 2, 3, 10
  const auto corpus = fixture::Tiny{}
                          .journal("T")
                          .journal("S")
                          .paper("t", "T", 2010)
                          .paper("s1", "S", 2011, {"t"})
                          .paper("s2", "S", 2012, {"t"})
                          .paper("s3", "S", 2013, {"t"})
                          .paper("s4", "S", 2020, {"t"})
                          .paper("u", "T", 2015)
                          .paper("v", "S", 2019, {"u"})
                          .build();
  const auto T = *corpus.find_journal("T");
  const auto S = *corpus.find_journal("S");
  CHECK(*cited_half_life(corpus, T, 2010) == doctest::Approx(2.5));
  CHECK(*cited_half_life(corpus, T, 2015) == doctest::Approx(4.0));
  CHECK_FALSE(cited_half_life(corpus, S, 2011));
  CHECK(*citing_half_life(corpus, S, 2020) == doctest::Approx(10.0));
  CHECK_FALSE(citing_half_life(corpus, T, 2010));
}

TEST_CASE("market share") {
  fixture::Tiny t;
  t.journal("A", "P").journal("B", "Q").journal("C");
  for (int i = 0; i < 200; ++i) t.paper(fmt::format("p{}", i), i < 50 ? "A" : "B", 2016);
  t.paper("solo", "A", 2015);
  t.paper("nopub", "C", 2016);
  const auto corpus = t.build();
  const auto P = *corpus.find_publisher("P");
  const auto Q = *corpus.find_publisher("Q");
  CHECK(*market_share(corpus, P, 2016) == doctest::Approx(0.25));
  CHECK(*market_share(corpus, P, 2015) == 1.0);
  CHECK_FALSE(market_share(corpus, P, 2000));
  CHECK(*market_share(corpus, P, 2016) + *market_share(corpus, Q, 2016) == doctest::Approx(1.0));
}

TEST_CASE("property: market shares partition every year") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto corpus = fixture::random_corpus({}, seed);
    for (int y = 2010; y <= 2014; ++y) {
      double total = 0.0;
      for (PublisherIndex p = 0; p < corpus.publishers().size(); ++p) total += market_share(corpus, p, y).value_or(0);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: impact equals a direct count") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto corpus = fixture::random_corpus({}, seed);
    for (JournalIndex j = 0; j < corpus.journals().size(); ++j) {
      for (int y = 2011; y <= 2014; ++y) {
        std::uint64_t papers = 0, cites = 0;
        for (PaperIndex p = 0; p < corpus.papers().size(); ++p) {
          const auto& paper = corpus.paper(p);
          if (paper.journal != j || (paper.year != y - 1 && paper.year != y - 2)) continue;
          ++papers;
          for (auto c : corpus.citers(p)) cites += corpus.paper(c).year == y;
        }
        const auto r = journal_impact(corpus, j, y);
        CHECK(r.has_value() == (papers > 0));
        if (r) CHECK(r->value() == doctest::Approx(double(cites) / double(papers)));
      }
    }
  }
}

TEST_CASE("impact table round trip") {
  const auto corpus = fixture::random_corpus({}, 3);
  const auto rows = impact_table(corpus, {2010, 2014}, nullptr, 2);
  CHECK_FALSE(rows.empty());
  const auto dir = fixture::scratch_dir("impact_csv");
  write_impact_csv(corpus, rows, dir / "impact.csv");
  const auto lookup = read_impact_csv(dir / "impact.csv");
  for (const auto& r : rows) {
    const auto& e = lookup.at({corpus.journal(r.journal).id, r.year});
    CHECK(e.impact.has_value() == r.impact.has_value());
    if (r.impact) CHECK(*e.impact == doctest::Approx(r.impact->value()));
  }
  CHECK(impact_table(corpus, {2010, 2014}, nullptr, 1).size() == rows.size());
}
