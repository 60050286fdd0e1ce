#include <doctest.h>

#include <fmt/format.h>

#include <random>

#include "citenet/authors.hpp"
#include "fixture.hpp"

using namespace citenet;

namespace {

using Groups = std::vector<std::vector<std::size_t>>;

// Agglomeration recomputed from scratch at every step: connected
// components over pairs above the pair threshold, then repeated merging of
// the best-linked pair of groups (average similarity, ties to the pair
// with the smallest members) until no pair exceeds the group threshold.
Groups agglomerate_oracle(const std::vector<double>& s, std::size_t m, double pair_thr, double group_thr) {
  std::vector<int> label(m, -1);
  int next = 0;
  for (std::size_t a = 0; a < m; ++a) {
    if (label[a] >= 0) continue;
    std::vector<std::size_t> stack{a};
    label[a] = next;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < m; ++v)
        if (label[v] < 0 && u != v && s[u * m + v] > pair_thr) {
          label[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  Groups groups(next);
  for (std::size_t a = 0; a < m; ++a) groups[label[a]].push_back(a);
  while (true) {
    double best = group_thr;
    std::size_t bx = 0, by = 0;
    bool found = false;
    for (std::size_t x = 0; x < groups.size(); ++x)
      for (std::size_t y = x + 1; y < groups.size(); ++y) {
        double total = 0;
        for (auto a : groups[x])
          for (auto b : groups[y]) total += s[a * m + b];
        const double avg = total / double(groups[x].size() * groups[y].size());
        if (avg > best) {
          best = avg;
          bx = x;
          by = y;
          found = true;
        }
      }
    if (!found) break;
    groups[bx].insert(groups[bx].end(), groups[by].begin(), groups[by].end());
    std::sort(groups[bx].begin(), groups[bx].end());
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(by));
    std::sort(groups.begin(), groups.end());
  }
  return groups;
}

Groups canonical(Groups g) {
  for (auto& x : g) std::sort(x.begin(), x.end());
  std::sort(g.begin(), g.end());
  return g;
}

std::vector<double> random_similarity(std::mt19937_64& rng, std::size_t m) {
  std::vector<double> s(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) s[a * m + b] = s[b * m + a] = double(rng() % 13) / 8.0;  // dyadic, so group sums are exact
  return s;
}

}  // namespace

TEST_CASE("name normalization") {
  CHECK(normalize_author_name("José  A. García") == "garcia, ja");
  CHECK(normalize_author_name("García, José A.") == "garcia, ja");
  CHECK(normalize_author_name("SMITH, John") == "smith, j");
  CHECK(normalize_author_name("Łukasz Żółć") == "zolc, l");
  CHECK(normalize_author_name("Mu\xcc\x88ller, Hans") == "muller, h");
  CHECK(normalize_author_name("Plato") == "plato");
}

TEST_CASE("paper similarity") {
  const auto corpus = fixture::Tiny{}
                          .journal("J")
                          .author("s1", "Smith, J.")
                          .author("s2", "Smith, J.")
                          .author("d", "Doe, A.")
                          .author("e", "Doe, A.")
                          .paper("r1", "J", 2000)
                          .paper("r2", "J", 2000)
                          .paper("lone", "J", 2000, {}, {"s1"})
                          .paper("x", "J", 2001, {}, {"s2"})
                          .paper("p1", "J", 2002, {"x"}, {"s1"})
                          .paper("q1", "J", 2003, {"r1", "r2"}, {"s1", "d"})
                          .paper("q2", "J", 2003, {"r1", "r2"}, {"s2", "e"})
                          .build();
  auto id = [&](const char* s) { return *corpus.find_paper(s); };
  SimilarityWeights w;
  CHECK(paper_similarity(corpus, id("lone"), id("x"), w, "smith, j") == 0.0);
  CHECK(paper_similarity(corpus, id("x"), id("p1"), w, "smith, j") == 1.0);
  w.w_shared_reference = 0.5;
  CHECK(paper_similarity(corpus, id("q1"), id("q2"), w, "smith, j") == 1.5);
  CHECK(paper_similarity(corpus, id("q1"), id("q2"), w) == 2.0);
}

TEST_CASE("disambiguation examples") {
  SUBCASE("a strong pair becomes one cluster") {
    const auto corpus = fixture::Tiny{}
                            .journal("J")
                            .author("a", "Kim, Y.")
                            .author("b", "Kim, Y.")
                            .author("c", "Lee, K.")
                            .author("d", "Lee, K.")
                            .paper("r", "J", 2000)
                            .paper("p1", "J", 2001, {"r"}, {"a", "c"})
                            .paper("p2", "J", 2002, {"p1", "r"}, {"b", "d"})
                            .build();
    const auto clusters = disambiguate(corpus, {});
    REQUIRE(clusters.clusters.size() == 2);
    CHECK(clusters.clusters[0].size() == 2);
    CHECK(clusters.block[0] == "kim, y");
  }
  SUBCASE("weakly linked singletons stay apart") {
    // the two papers share one citer: similarity 0.1 under w_shared_citation 0.1
    const auto corpus = fixture::Tiny{}
                            .journal("J")
                            .author("a", "Kim, Y.")
                            .author("b", "Kim, Y.")
                            .paper("p1", "J", 2001, {}, {"a", "x"})
                            .paper("p2", "J", 2001, {}, {"b", "y"})
                            .paper("c", "J", 2002, {"p1", "p2"}, {"z"})
                            .build();
    SimilarityWeights w;
    w.w_shared_citation = 0.1;
    const auto clusters = disambiguate(corpus, w);
    std::size_t kim = 0;
    for (const auto& b : clusters.block) kim += b == "kim, y";
    CHECK(kim == 2);
  }
  SUBCASE("uncited single-author singletons are excluded") {
    const auto corpus = fixture::Tiny{}.journal("J").author("a", "Solo, H.").paper("p", "J", 2001, {}, {"a"}).build();
    const auto clusters = disambiguate(corpus, {});
    CHECK(clusters.clusters.empty());
    CHECK(clusters.excluded.size() == 1);
  }
}

TEST_CASE("merging by average link can leave a strong single link unused") {
  // 0 and 1 merge first (0.5). Against the pair, 2 averages 0.15 and stays
  // out although its link to 0 alone (0.3) is above the threshold; 3
  // averages 0.2 and joins.
  const std::size_t m = 4;
  std::vector<double> s(m * m, 0.0);
  auto set = [&](std::size_t a, std::size_t b, double v) { s[a * m + b] = s[b * m + a] = v; };
  set(0, 1, 0.5);
  set(0, 2, 0.3);
  set(0, 3, 0.2);
  set(1, 3, 0.2);
  const auto got = canonical(cluster_block(s, m, 1.0, 0.19));
  CHECK(got == canonical(agglomerate_oracle(s, m, 1.0, 0.19)));
  CHECK(got == Groups{{0, 1, 3}, {2}});
}

TEST_CASE("property: same fixed point as the exhaustive oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + rng() % 6;
    const auto s = random_similarity(rng, m);
    for (double thr : {0.5, 0.19, 0.05})
      CHECK(canonical(cluster_block(s, m, 1.0, thr)) == canonical(agglomerate_oracle(s, m, 1.0, thr)));
  }
}

TEST_CASE("property: cluster count never grows as the group threshold drops") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + rng() % 10;
    const auto s = random_similarity(rng, m);
    std::size_t previous = m + 1;
    for (double thr : {0.5, 0.19, 0.05}) {
      const auto count = cluster_block(s, m, 1.0, thr).size();
      CHECK(count <= previous);
      previous = count;
    }
  }
}

TEST_CASE("demographics") {
  SUBCASE("academic age") {
    const auto corpus = fixture::Tiny{}
                            .journal("Q", "P", {"10"}, true)
                            .paper("p1", "Q", 2010, {}, {"a"})
                            .paper("p2", "Q", 2018, {}, {"a"})
                            .build();
    AuthorClusters clusters;
    clusters.clusters = {{{"a", 0}, {"a", 1}}};
    clusters.block = {"a"};
    const auto stats = author_demographics(corpus, clusters, true);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].academic_age == 8);
    CHECK(stats[0].paper_count == 2);
    CHECK(stats[0].self_cited_fraction == 0.0);
    CHECK(stats[0].self_citing_fraction == 0.0);
    CHECK(author_demographics(corpus, clusters, false).empty());
  }
  SUBCASE("one paper citing the other") {
    const auto corpus = fixture::Tiny{}
                            .journal("Q", "P", {"10"}, true)
                            .author("a", "Park, S.")
                            .paper("p1", "Q", 2010, {}, {"a"})
                            .paper("p2", "Q", 2012, {"p1"}, {"a"})
                            .build();
    const auto clusters = disambiguate(corpus, {});
    REQUIRE(clusters.clusters.size() == 1);
    const auto stats = author_demographics(corpus, clusters, true);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].self_citing_fraction == 0.5);
    CHECK(stats[0].self_cited_fraction == 0.5);
    CHECK(stats[0].group_own_self_cited == 1);
    CHECK(stats[0].group_own_self_citing == 1);
  }
}

TEST_CASE("clusters are deterministic across thread counts") {
  const auto corpus = fixture::random_corpus({.journals = 6, .max_references = 8}, 31);
  const auto one = disambiguate(corpus, {}, 1);
  const auto four = disambiguate(corpus, {}, 4);
  CHECK(one.clusters == four.clusters);
  CHECK(one.block == four.block);
  std::size_t mentions = one.excluded.size();
  for (const auto& c : one.clusters) mentions += c.size();
  std::size_t expected = 0;
  for (const auto& p : corpus.papers()) expected += p.author_keys.size();
  CHECK(mentions == expected);
}
