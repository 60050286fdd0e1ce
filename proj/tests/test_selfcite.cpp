#include <doctest.h>

#include <fmt/format.h>

#include <random>

#include "citenet/selfcite.hpp"
#include "fixture.hpp"

using namespace citenet;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd unit(Eigen::Index n, std::initializer_list<JournalIndex> members) {
  std::vector<JournalIndex> m(members);
  return indicator<double>(n, m);
}

// psi of journal i straight from its definition, summing matrix entries
// with explicit loops.
std::optional<double> psi_oracle(const MatrixXd& c, const VectorXd& n, const std::vector<int>& pub, int i) {
  const auto J = c.rows();
  auto in_pub = [&](Eigen::Index j) { return std::find(pub.begin(), pub.end(), int(j)) != pub.end(); };
  double internal = 0, pub_refs = 0, pub_recv = 0, papers = 0, refs_i = 0, recv_i = 0, to_pub = 0, from_pub = 0;
  for (Eigen::Index a = 0; a < J; ++a)
    for (Eigen::Index b = 0; b < J; ++b) {
      if (in_pub(a) && in_pub(b)) internal += c(a, b);
      if (in_pub(a)) pub_refs += c(a, b);
      if (in_pub(b)) pub_recv += c(a, b);
    }
  for (int j : pub) papers += n(j);
  for (Eigen::Index b = 0; b < J; ++b) {
    refs_i += c(i, b);
    recv_i += c(b, i);
    if (in_pub(b)) {
      to_pub += c(i, b);
      from_pub += c(b, i);
    }
  }
  if (pub_refs == 0 || pub_recv == 0 || internal == 0 || refs_i == 0 || recv_i == 0 || from_pub == 0) return {};
  const double q_r = internal / pub_refs, q_c = internal / pub_recv;
  return (1.0 / papers) * ((to_pub / refs_i) / q_r) / ((from_pub / recv_i) / q_c);
}

MatrixXd random_counts(std::mt19937_64& rng, int n) {
  MatrixXd c(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) c(a, b) = double(rng() % 7);
  return c;
}

}  // namespace

TEST_CASE("citation and reference rates") {
  // journal 0 receives 4 citations, one of them from journal 2
  MatrixXd c = MatrixXd::Zero(3, 3);
  c(1, 0) = 3;
  c(2, 0) = 1;
  c(0, 1) = 7;
  c(0, 2) = 3;
  CHECK(*citation_rate(c, unit(3, {0}), unit(3, {2})) == doctest::Approx(0.25));
  CHECK(*citation_rate(c, unit(3, {0}), unit(3, {0, 1, 2})) == 1.0);
  CHECK_FALSE(citation_rate(MatrixXd::Zero(3, 3).eval(), unit(3, {2}), unit(3, {0})));
  CHECK(*reference_rate(c, unit(3, {0}), unit(3, {2})) == doctest::Approx(0.3));
  CHECK(*reference_rate(c, unit(3, {0}), unit(3, {0})) == 0.0);
  CHECK(*reference_rate(c, unit(3, {0}), unit(3, {0, 1, 2})) == 1.0);

  const SparseCounts<double> s = c.sparseView();
  CHECK(*citation_rate(s, unit(3, {0}), unit(3, {2})) == doctest::Approx(0.25));
  CHECK(*reference_rate(s, unit(3, {0}), unit(3, {2})) == doctest::Approx(0.3));
}

TEST_CASE("rates from a corpus honour the citing-year window") {
  const auto corpus = fixture::Tiny{}
                          .journal("A", "P")
                          .journal("B", "P")
                          .journal("X", "Q")
                          .paper("a", "A", 2010)
                          .paper("b1", "B", 2011, {"a"})
                          .paper("x1", "X", 2011, {"a"})
                          .paper("x2", "X", 2012, {"a"})
                          .paper("x3", "X", 2013, {"a"})
                          .build();
  RateQuery q;
  q.source_id = "A";
  q.target_kind = GroupKind::journal;
  q.target_ids = {"B"};
  CHECK(*evaluate_rate(corpus, q) == doctest::Approx(0.25));
  q.window = {2011, 2011};
  CHECK(*evaluate_rate(corpus, q) == doctest::Approx(0.5));
  q.target_kind = GroupKind::all;
  q.target_ids = {};
  CHECK(*evaluate_rate(corpus, q) == 1.0);
  q.window = {2015, 2016};
  CHECK_FALSE(evaluate_rate(corpus, q));
  q.target_kind = GroupKind::journal;
  q.target_ids = {"nope"};
  CHECK_THROWS_AS(evaluate_rate(corpus, q), Error);
}

TEST_CASE("publisher expectations") {
  // A, B belong to the publisher, X does not: 2 internal, 2 outbound and
  // 2 inbound edges
  MatrixXd c = MatrixXd::Zero(3, 3);
  c(0, 1) = c(1, 0) = 1;
  c(0, 2) = c(1, 2) = 1;
  c(2, 0) = c(2, 1) = 1;
  auto e = publisher_self_expectations(c, unit(3, {0, 1}));
  CHECK(*e.q_r == doctest::Approx(0.5));
  CHECK(*e.q_c == doctest::Approx(0.5));

  MatrixXd closed = MatrixXd::Zero(3, 3);
  closed(0, 1) = 2;
  closed(1, 0) = 1;
  closed(2, 2) = 4;
  CHECK(*publisher_self_expectations(closed, unit(3, {0, 1})).q_r == 1.0);

  MatrixXd ignored = MatrixXd::Zero(3, 3);
  ignored(0, 2) = 3;
  CHECK_FALSE(publisher_self_expectations(ignored, unit(3, {0, 1})).q_c);
}

TEST_CASE("neutral journal scores one over the publisher size") {
  MatrixXd c = MatrixXd::Zero(3, 3);
  c(0, 1) = c(1, 0) = 1;
  c(0, 2) = c(1, 2) = 1;
  c(2, 0) = c(2, 1) = 1;
  std::vector<JournalIndex> pub{0, 1};
  VectorXd n(3);
  n << 60, 40, 500;
  CHECK(*solidarity_index(c, n, pub, 0).psi == doctest::Approx(0.01));
  n << 600, 400, 500;
  CHECK(*solidarity_index(c, n, pub, 0).psi == doctest::Approx(0.001));
}

TEST_CASE("a journal favouring its publisher scores higher than a neutral sibling") {
  // journals 0,1,2 share a publisher, 3 is outside; journal 0 sends twice
  // as many references into the publisher as journal 1
  MatrixXd c = MatrixXd::Zero(4, 4);
  c(0, 1) = 4;
  c(0, 2) = 4;
  c(0, 3) = 2;
  c(1, 0) = 2;
  c(1, 2) = 2;
  c(1, 3) = 6;
  c(2, 0) = 2;
  c(2, 1) = 2;
  c(2, 3) = 6;
  c(3, 0) = 5;
  c(3, 1) = 5;
  c(3, 2) = 5;
  VectorXd n = VectorXd::Constant(4, 10);
  std::vector<JournalIndex> pub{0, 1, 2};
  const auto s0 = solidarity_index(c, n, pub, 0);
  const auto s1 = solidarity_index(c, n, pub, 1);
  REQUIRE(s0.psi);
  REQUIRE(s1.psi);
  CHECK(*s0.psi > *s1.psi);
  CHECK(*s0.psi == doctest::Approx(*psi_oracle(c, n, {0, 1, 2}, 0)).epsilon(1e-12));
  CHECK(*s1.psi == doctest::Approx(*psi_oracle(c, n, {0, 1, 2}, 1)).epsilon(1e-12));
}

TEST_CASE("standalone journals are excluded, zero denominators undefined") {
  MatrixXd c = MatrixXd::Zero(3, 3);
  c(0, 1) = 1;
  VectorXd n = VectorXd::Ones(3);
  std::vector<JournalIndex> solo{2};
  CHECK(solidarity_index(c, n, solo, 2).status == ScoreStatus::excluded);
  std::vector<JournalIndex> pair{0, 1};
  const auto s = solidarity_index(c, n, pair, 0);
  CHECK(s.status == ScoreStatus::undefined);
  CHECK_FALSE(s.psi);
  CHECK_THROWS_AS(solidarity_index(c, n, pair, 2), Error);
}

TEST_CASE("solidarity ratio") {
  SolidarityScore<double> q, u;
  q.psi = 0.01;
  u.psi = 0.01;
  CHECK(*solidarity_ratio(q, u) == 1.0);
  q.psi = 0.02;
  CHECK(*solidarity_ratio(q, u) == doctest::Approx(2.0));
  u.psi.reset();
  CHECK_FALSE(solidarity_ratio(q, u));
}

TEST_CASE("property: psi matches the loop oracle on random count tables") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + int(rng() % 5);
    const MatrixXd c = random_counts(rng, n);
    VectorXd papers(n);
    for (int j = 0; j < n; ++j) papers(j) = 1 + double(rng() % 50);
    std::vector<JournalIndex> pub;
    std::vector<int> pub_int;
    for (int j = 0; j < n; ++j)
      if (rng() % 2 || pub.size() < 2) {
        pub.push_back(JournalIndex(j));
        pub_int.push_back(j);
      }
    for (auto j : pub) {
      const auto got = solidarity_index(c, papers, pub, j).psi;
      const auto want = psi_oracle(c, papers, pub_int, int(j));
      REQUIRE(got.has_value() == want.has_value());
      if (got) CHECK(*got == doctest::Approx(*want).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: scaling every count leaves psi unchanged") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + int(rng() % 5);
    const MatrixXd c = random_counts(rng, n);
    const VectorXd papers = VectorXd::Constant(n, 20);
    std::vector<JournalIndex> pub{0, 1, 2};
    const SparseCounts<double> sparse = c.sparseView();
    for (double k : {2.0, 10.0, 1000.0}) {
      const MatrixXd scaled = k * c;
      for (auto j : pub) {
        const auto a = solidarity_index(c, papers, pub, j).psi;
        const auto b = solidarity_index(scaled, papers, pub, j).psi;
        const auto s = solidarity_index(sparse, papers, pub, j).psi;
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
          CHECK(std::abs(*a - *b) <= 1e-12 * std::max(1.0, std::abs(*a)));
          CHECK(*s == doctest::Approx(*a).epsilon(1e-14));
        }
      }
    }
  }
}

TEST_CASE("property: rates over a partition sum to one") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + int(rng() % 7);
    const MatrixXd c = random_counts(rng, n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::vector<JournalIndex>> parts(3);
      for (int j = 0; j < n; ++j) parts[rng() % 3].push_back(JournalIndex(j));
      double cited = 0, referenced = 0;
      bool defined = true;
      for (const auto& part : parts) {
        const auto cr = citation_rate(c, unit(n, {JournalIndex(i)}), indicator<double>(n, part));
        const auto rr = reference_rate(c, unit(n, {JournalIndex(i)}), indicator<double>(n, part));
        if (!cr || !rr) defined = false;
        cited += cr.value_or(0);
        referenced += rr.value_or(0);
      }
      if (!defined) continue;
      CHECK(std::abs(cited - 1.0) <= 1e-12);
      CHECK(std::abs(referenced - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("corpus-level scores agree with the count-matrix form") {
  const auto corpus = fixture::random_corpus({}, 21);
  const auto scores = solidarity_scores(corpus);
  REQUIRE(scores.size() == corpus.journals().size());
  const MatrixXd dense = MatrixXd(journal_citation_counts(corpus));
  const VectorXd papers = journal_paper_counts(corpus);
  for (const auto& s : scores) {
    const auto& pub = corpus.publisher(corpus.journal(s.journal).publisher).journals;
    const auto direct = solidarity_index(dense, papers, pub, s.journal);
    CHECK(direct.psi.has_value() == s.psi.has_value());
    if (s.psi) CHECK(*s.psi == doctest::Approx(*direct.psi).epsilon(1e-12));
  }
  const auto dir = fixture::scratch_dir("selfcite_csv");
  write_solidarity_csv(corpus, scores, dir / "solidarity.csv");
  CHECK(std::filesystem::file_size(dir / "solidarity.csv") > 0);
}

TEST_CASE("self-rate summary") {
  const auto corpus = fixture::Tiny{}
                          .journal("A", "P")
                          .journal("B", "P")
                          .journal("X", "Q")
                          .paper("a0", "A", 2010)
                          .paper("b0", "B", 2010)
                          .paper("a1", "A", 2011, {"a0", "b0"})
                          .paper("b1", "B", 2011, {"a0", "b0"})
                          .paper("x1", "X", 2011, {"a0"})
                          .build();
  const std::vector<std::pair<std::string, std::vector<JournalIndex>>> groups = {
      {"QJ", {*corpus.find_journal("A"), *corpus.find_journal("B")}}};
  const auto rows = self_rate_summary(corpus, groups, {2011, 2011});
  auto find = [&](SelfLevel level, RateKind kind) {
    for (const auto& r : rows)
      if (r.level == level && r.kind == kind && r.year == 2011) return r;
    FAIL("row missing");
    return SelfRateSummary{};
  };
  // in 2011 A receives 3 citations (1 from itself), B receives 2 (1 from itself)
  const auto journal_cit = find(SelfLevel::journal, RateKind::citation);
  CHECK(journal_cit.n == 2);
  CHECK(*journal_cit.mean == doctest::Approx((1.0 / 3 + 1.0 / 2) / 2));
  const auto group_ref = find(SelfLevel::group, RateKind::reference);
  CHECK(*group_ref.mean == doctest::Approx(1.0));
  CHECK(*group_ref.ci_low == doctest::Approx(1.0));
}
