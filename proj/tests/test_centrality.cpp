#include <doctest.h>

#include <fmt/format.h>

#include "citenet/centrality.hpp"
#include "fixture.hpp"
#include "graph_oracles.hpp"

using namespace citenet;
using Eigen::VectorXd;

namespace {

Digraph graph(std::size_t n, std::vector<Digraph::Edge> edges) { return Digraph(n, edges); }

double max_error(const VectorXd& a, const VectorXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("journal network aggregates paper citations") {
  const auto corpus = fixture::Tiny{}
                          .journal("A")
                          .journal("B")
                          .paper("b1", "B", 2010)
                          .paper("b2", "B", 2010)
                          .paper("a1", "A", 2011, {"b1", "b2"})
                          .paper("a2", "A", 2012, {"b1"})
                          .paper("a3", "A", 2014, {"b1"})
                          .build();
  const auto net = build_journal_network(corpus, 2010, 2, LinkType::citation);
  REQUIRE(net.nodes.size() == 2);
  const Eigen::MatrixXd w = net.graph.weights();
  const auto a = net.node_of(*corpus.find_journal("A"));
  const auto b = net.node_of(*corpus.find_journal("B"));
  CHECK(w(a, b) == 3.0);
  CHECK(w.sum() == 3.0);
  CHECK(net.node_of(99) == kNoIndex);
}

TEST_CASE("reference links mirror citation links of the shifted year") {
  const auto corpus = fixture::Tiny{}
                          .journal("A")
                          .journal("B")
                          .journal("C")
                          .paper("a0", "A", 2010)
                          .paper("b0", "B", 2010)
                          .paper("c0", "C", 2010)
                          .paper("a1", "A", 2011, {"b0", "c0"})
                          .paper("b1", "B", 2011, {"a0"})
                          .paper("c1", "C", 2011, {"a0", "b0", "c0"})
                          .build();
  const auto cite = build_journal_network(corpus, 2010, 1, LinkType::citation);
  const auto ref = build_journal_network(corpus, 2011, 1, LinkType::reference);
  CHECK(cite.nodes == ref.nodes);
  CHECK(Eigen::MatrixXd(cite.graph.weights()) == Eigen::MatrixXd(ref.graph.weights()));
}

TEST_CASE("windows outside the corpus range are rejected; empty years warn") {
  const auto corpus = fixture::Tiny{{2000, 2012}}.journal("A").paper("a", "A", 2010).build();
  CHECK_THROWS_AS(build_journal_network(corpus, 2011, 2, LinkType::citation), Error);
  CHECK_THROWS_AS(build_journal_network(corpus, 2001, 2, LinkType::reference), Error);
  const auto net = build_journal_network(corpus, 2005, 2, LinkType::citation);
  CHECK(net.empty());
  CHECK(net.warnings.size() == 1);
  CHECK_THROWS_AS(compute_centrality(net, Metric::pagerank), Error);
}

TEST_CASE("betweenness examples") {
  const auto path = betweenness(graph(3, {{0, 1, 1}, {1, 2, 1}}));
  CHECK(path(0) == 0.0);
  CHECK(path(1) == 1.0);
  CHECK(path(2) == 0.0);
  std::vector<Digraph::Edge> complete;
  for (std::uint32_t u = 0; u < 3; ++u)
    for (std::uint32_t v = 0; v < 3; ++v)
      if (u != v) complete.push_back({u, v, 1});
  CHECK(betweenness(graph(3, complete)).isZero());
  CHECK(betweenness(graph(2, {})).isZero());
}

TEST_CASE("closeness examples") {
  std::vector<Digraph::Edge> star;
  for (std::uint32_t k = 1; k < 5; ++k) star.push_back({k, 0, 1});
  const auto cc = closeness(graph(6, star));
  for (int k = 1; k < 6; ++k) CHECK(cc(0) > cc(k));
  CHECK(cc(5) == 0.0);
  // 0 -> 1 -> 2 -> 3, 3 -> 0
  const std::vector<Digraph::Edge> ring{{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}};
  const auto c4 = closeness(graph(4, ring));
  const auto want = oracle::closeness(oracle::adjacency(Eigen::MatrixXd(graph(4, ring).weights())));
  CHECK(max_error(c4, want) < 1e-12);
  CHECK(c4(0) == doctest::Approx(1.0 + 0.5 + 1.0 / 3));
}

TEST_CASE("pagerank examples") {
  const auto cycle = pagerank(graph(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}));
  for (int k = 0; k < 3; ++k) CHECK(cycle(k) == doctest::Approx(1.0 / 3).epsilon(1e-9));
  const std::vector<Digraph::Edge> base{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 2, 1}};
  auto looped = base;
  looped.push_back({1, 1, 2});
  const auto before = pagerank(graph(3, base));
  const auto after = pagerank(graph(3, looped));
  CHECK(after(1) > before(1));
  CHECK(std::abs(after.sum() - 1.0) < 1e-12);
  CHECK(max_error(after, oracle::pagerank(Eigen::MatrixXd(graph(3, looped).weights()))) < 1e-9);
  PageRankOptions hopeless;
  hopeless.max_iterations = 1;
  CHECK_THROWS_AS(pagerank(graph(3, base), hopeless), Error);
}

TEST_CASE("pathcore examples") {
  // clique on 0,1,2 plus pendants 3,4,5 hanging off it in both directions
  std::vector<Digraph::Edge> edges;
  for (std::uint32_t u = 0; u < 3; ++u)
    for (std::uint32_t v = 0; v < 3; ++v)
      if (u != v) edges.push_back({u, v, 1});
  for (std::uint32_t k = 0; k < 3; ++k) {
    edges.push_back({3 + k, k, 1});
    edges.push_back({k, 3 + k, 1});
  }
  const auto g = graph(6, edges);
  const auto pc = pathcore(g);
  for (int c = 0; c < 3; ++c)
    for (int p = 3; p < 6; ++p) CHECK(pc(c) > pc(p));
  CHECK(max_error(pc, oracle::pathcore(oracle::adjacency(Eigen::MatrixXd(g.weights())))) < 1e-12);
  CHECK(pathcore(graph(4, {})).isZero());
  CHECK(pc.minCoeff() >= 0.0);
  CHECK(pc.maxCoeff() <= 1.0);
}

TEST_CASE("property: metrics match brute-force oracles on random digraphs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rg = oracle::random_graph(rng, 7);
    const Digraph g(rg.n, rg.edges);
    CHECK(max_error(betweenness(g), oracle::betweenness(rg.adj)) < 1e-9);
    CHECK(max_error(closeness(g), oracle::closeness(rg.adj)) < 1e-9);
    CHECK(max_error(pathcore(g), oracle::pathcore(rg.adj)) < 1e-9);
    const auto pr = pagerank(g);
    CHECK(max_error(pr, oracle::pagerank(rg.w)) < 1e-9);
    CHECK(std::abs(pr.sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("property: results do not depend on the thread count") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rg = oracle::random_graph(rng, 8);
    const Digraph g(rg.n, rg.edges);
    CHECK(betweenness(g, 1) == betweenness(g, 4));
    CHECK(closeness(g, 1) == closeness(g, 3));
    CHECK(pathcore(g, 1) == pathcore(g, 8));
  }
}

TEST_CASE("comparison counts strict UJ wins") {
  fixture::Tiny t;
  for (int k = 0; k < 8; ++k) t.journal(fmt::format("J{}", k), "P", {"10"}, k < 4);
  t.paper("x", "J0", 2016);
  const auto corpus = t.build();
  JournalCitationNetwork net;
  for (JournalIndex j = 0; j < 8; ++j) net.nodes.push_back(j);
  net.graph = Digraph(8, {});
  std::vector<MatchRecord> matches;
  for (JournalIndex q = 0; q < 4; ++q) {
    MatchRecord m;
    m.qj = q;
    m.qj_id = corpus.journal(q).id;
    m.uj = q + 4;
    m.uj_id = corpus.journal(q + 4).id;
    matches.push_back(m);
  }
  CentralityVector v{&net, Metric::betweenness, VectorXd(8)};
  SUBCASE("three of four") {
    v.scores << 1, 1, 1, 1, 2, 2, 2, 0.5;
    const std::vector<CentralityVector> vs{v};
    const auto report = centrality_comparison(corpus, matches, vs);
    REQUIRE(report.metrics.size() == 1);
    CHECK(*report.metrics[0].fraction() == doctest::Approx(0.75));
    CHECK(report.metrics[0].log_differences.size() == 4);
  }
  SUBCASE("ties are not wins") {
    v.scores.setConstant(1.0);
    const std::vector<CentralityVector> vs{v};
    CHECK(*centrality_comparison(corpus, matches, vs).metrics[0].fraction() == 0.0);
  }
  SUBCASE("all wins") {
    v.scores << 1, 1, 1, 1, 2, 2, 2, 2;
    const std::vector<CentralityVector> vs{v};
    CHECK(*centrality_comparison(corpus, matches, vs).metrics[0].fraction() == 1.0);
  }
}

TEST_CASE("file names and metric names") {
  CHECK(centrality_file_name(Metric::betweenness, 2016, 2, LinkType::citation) == "centrality_BC_2016_2citation.csv");
  for (auto m : kAllMetrics) CHECK(parse_metric(metric_name(m)) == m);
  CHECK_THROWS_AS(parse_metric("XX"), Error);
}
