#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"

namespace citenet {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Journal-level citation counts; entry (i, j) is the number of citations
/// papers of journal i make to papers of journal j.
template <class Scalar>
using SparseCounts = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

/// Counts over citation edges whose citing paper year lies in `window`.
SparseCounts<double> journal_citation_counts(const Corpus& corpus, YearWindow window = YearWindow::all());

/// N_j: papers published by each journal within `window`.
Vector<double> journal_paper_counts(const Corpus& corpus, YearWindow window = YearWindow::all());

/// 0/1 membership vector over n journals.
template <class Scalar>
Vector<Scalar> indicator(Eigen::Index n, std::span<const JournalIndex> members) {
  Vector<Scalar> v = Vector<Scalar>::Zero(n);
  for (auto m : members) v(static_cast<Eigen::Index>(m)) = Scalar(1);
  return v;
}

/// Share of the citations received by `source` that originate in `target`.
/// Both arguments are membership vectors; works for dense or sparse counts.
template <class Counts, class Source, class Target>
std::optional<typename Counts::Scalar> citation_rate(const Counts& counts, const Eigen::MatrixBase<Source>& source,
                                                     const Eigen::MatrixBase<Target>& target) {
  using Scalar = typename Counts::Scalar;
  const Vector<Scalar> received = counts * source;  // received(a) = citations a gives to source
  const Scalar total = received.sum();
  if (!(total > Scalar(0))) return std::nullopt;
  return received.dot(target) / total;
}

/// Share of the references made by `source` that land in `target`.
template <class Counts, class Source, class Target>
std::optional<typename Counts::Scalar> reference_rate(const Counts& counts, const Eigen::MatrixBase<Source>& source,
                                                      const Eigen::MatrixBase<Target>& target) {
  using Scalar = typename Counts::Scalar;
  const Vector<Scalar> made = counts.transpose() * source;  // made(a) = citations source gives to a
  const Scalar total = made.sum();
  if (!(total > Scalar(0))) return std::nullopt;
  return made.dot(target) / total;
}

template <class Scalar>
struct PublisherExpectation {
  std::optional<Scalar> q_r;  // internal citations / references made by the publisher
  std::optional<Scalar> q_c;  // internal citations / citations received by the publisher
};

template <class Counts, class Members>
PublisherExpectation<typename Counts::Scalar> publisher_self_expectations(const Counts& counts,
                                                                         const Eigen::MatrixBase<Members>& members) {
  using Scalar = typename Counts::Scalar;
  const Vector<Scalar> received_from = counts * members;           // citations each journal gives to P
  const Vector<Scalar> made_by = counts.transpose() * members;     // citations each journal gets from P
  const Scalar internal = received_from.dot(members);
  const Scalar references = made_by.sum();
  const Scalar received = received_from.sum();
  PublisherExpectation<Scalar> e;
  if (references > Scalar(0)) e.q_r = internal / references;
  if (received > Scalar(0)) e.q_c = internal / received;
  return e;
}

enum class ScoreStatus { defined, undefined, excluded };

template <class Scalar>
struct SolidarityScore {
  JournalIndex journal = kNoIndex;
  ScoreStatus status = ScoreStatus::undefined;
  std::optional<Scalar> psi;
  std::optional<Scalar> q_r;
  std::optional<Scalar> q_c;
  Scalar publisher_paper_total = Scalar(0);
  std::optional<Scalar> numerator_rate_sum;    // sum over the publisher of R_r(i; j)
  std::optional<Scalar> denominator_rate_sum;  // sum over the publisher of R_c(i; j)
};

struct SolidarityOptions {
  /// Whether journal i itself counts among "its publisher's journals" in the
  /// rate sums. Q_r and Q_c always span the whole publisher.
  bool include_self = true;
};

/// Row sums, column sums and diagonal of a count matrix, shared by all
/// publishers when scoring a whole corpus.
template <class Scalar>
struct CountTotals {
  Vector<Scalar> references_made;
  Vector<Scalar> citations_received;
  Vector<Scalar> self_citations;
};

template <class Counts>
CountTotals<typename Counts::Scalar> count_totals(const Counts& counts) {
  using Scalar = typename Counts::Scalar;
  const Vector<Scalar> ones = Vector<Scalar>::Ones(counts.cols());
  CountTotals<Scalar> t;
  t.references_made = counts * ones;
  t.citations_received = counts.transpose() * ones;
  t.self_citations = counts.diagonal();
  return t;
}

/// Solidarity scores of every journal owned by one publisher.
///
///   psi(i) = 1/sum(N_j) * (sum_j R_r(i;j) / Q_r) / (sum_j R_c(i;j) / Q_c)
///
/// with j running over the publisher's journals. Standalone journals
/// (publisher with fewer than two journals) are excluded; zero
/// denominators leave the score undefined.
template <class Counts, class Sizes>
std::vector<SolidarityScore<typename Counts::Scalar>> publisher_solidarity(
    const Counts& counts, const CountTotals<typename Counts::Scalar>& totals, const Eigen::MatrixBase<Sizes>& papers,
    std::span<const JournalIndex> publisher_journals, const SolidarityOptions& options = {}) {
  using Scalar = typename Counts::Scalar;
  std::vector<SolidarityScore<Scalar>> scores(publisher_journals.size());
  for (std::size_t k = 0; k < publisher_journals.size(); ++k) scores[k].journal = publisher_journals[k];
  if (publisher_journals.size() < 2) {
    for (auto& s : scores) s.status = ScoreStatus::excluded;
    return scores;
  }
  const Vector<Scalar> members = indicator<Scalar>(counts.rows(), publisher_journals);
  const Vector<Scalar> references_into = counts * members;             // citations each journal gives to P
  const Vector<Scalar> citations_from = counts.transpose() * members;  // citations each journal gets from P
  const Scalar internal = references_into.dot(members);
  const Scalar publisher_references = totals.references_made.dot(members);
  const Scalar publisher_received = totals.citations_received.dot(members);
  const Scalar paper_total = papers.dot(members);

  std::optional<Scalar> q_r, q_c;
  if (publisher_references > Scalar(0)) q_r = internal / publisher_references;
  if (publisher_received > Scalar(0)) q_c = internal / publisher_received;

  for (auto& score : scores) {
    const auto i = static_cast<Eigen::Index>(score.journal);
    score.q_r = q_r;
    score.q_c = q_c;
    score.publisher_paper_total = paper_total;
    const Scalar loop = options.include_self ? Scalar(0) : totals.self_citations(i);
    if (totals.references_made(i) > Scalar(0))
      score.numerator_rate_sum = (references_into(i) - loop) / totals.references_made(i);
    if (totals.citations_received(i) > Scalar(0))
      score.denominator_rate_sum = (citations_from(i) - loop) / totals.citations_received(i);
    const bool usable = q_r && q_c && *q_r > Scalar(0) && *q_c > Scalar(0) && score.numerator_rate_sum &&
                        score.denominator_rate_sum && *score.denominator_rate_sum > Scalar(0) &&
                        paper_total > Scalar(0);
    if (!usable) {
      score.status = ScoreStatus::undefined;
      continue;
    }
    score.status = ScoreStatus::defined;
    score.psi = (Scalar(1) / paper_total) * (*score.numerator_rate_sum / *q_r) / (*score.denominator_rate_sum / *q_c);
  }
  return scores;
}

/// Score of a single journal; `papers` holds N_j for every journal.
template <class Counts, class Sizes>
SolidarityScore<typename Counts::Scalar> solidarity_index(const Counts& counts, const Eigen::MatrixBase<Sizes>& papers,
                                                          std::span<const JournalIndex> publisher_journals,
                                                          JournalIndex journal, const SolidarityOptions& options = {}) {
  const auto scores = publisher_solidarity(counts, count_totals(counts), papers, publisher_journals, options);
  for (const auto& s : scores)
    if (s.journal == journal) return s;
  throw Error("solidarity_index: journal is not a member of the given publisher");
}

/// psi_q / psi_u; nullopt unless both are defined and psi_u is nonzero.
template <class Scalar>
std::optional<Scalar> solidarity_ratio(const SolidarityScore<Scalar>& questioned,
                                       const SolidarityScore<Scalar>& unquestioned) {
  if (!questioned.psi || !unquestioned.psi || *unquestioned.psi == Scalar(0)) return std::nullopt;
  return *questioned.psi / *unquestioned.psi;
}

/// Journal lists per publisher, indexed by PublisherIndex.
std::vector<std::vector<JournalIndex>> publisher_journal_lists(const Corpus& corpus);

struct PsiOptions {
  YearWindow window = YearWindow::all();
  bool include_self = true;
};

/// Scores for every journal of the corpus, in journal order. Journals
/// without a publisher are excluded.
std::vector<SolidarityScore<double>> solidarity_scores(const Corpus& corpus, const PsiOptions& options = {});

void write_solidarity_csv(const Corpus& corpus, const std::vector<SolidarityScore<double>>& scores,
                          const std::filesystem::path& path);

enum class RateKind { citation, reference };
enum class GroupKind { journal, journal_set, publisher, publisher_set, all };

struct RateQuery {
  RateKind kind = RateKind::citation;
  GroupKind source_kind = GroupKind::journal;  // journal or publisher
  std::string source_id;
  GroupKind target_kind = GroupKind::journal;
  std::vector<std::string> target_ids;
  YearWindow window = YearWindow::all();
};

/// Resolves a group to journal indices; throws Error on unknown ids or an
/// empty group.
std::vector<JournalIndex> resolve_group(const Corpus& corpus, GroupKind kind, const std::vector<std::string>& ids);

std::optional<double> evaluate_rate(const Corpus& corpus, const RateQuery& query);

/// Query file columns: kind,source_type,source_id,target_type,target_ids,first_year,last_year.
/// target_ids are ';'-separated; empty years mean unbounded.
std::vector<RateQuery> read_rate_queries(const std::filesystem::path& path);
void write_rates_csv(const Corpus& corpus, const std::vector<RateQuery>& queries, const std::filesystem::path& path);

enum class SelfLevel { journal, group, publisher };
std::string_view self_level_name(SelfLevel level);

/// Mean self-citation or self-reference rate of one journal group in one
/// citing year, with a normal-approximation 95% interval.
struct SelfRateSummary {
  SelfLevel level = SelfLevel::journal;
  std::string group;
  int year = 0;
  RateKind kind = RateKind::citation;
  std::optional<double> mean;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::size_t n = 0;
};

/// For each named group and year: the journal's rate towards itself, towards
/// its own group, and towards its publisher. Journals without a publisher
/// are skipped at publisher level.
std::vector<SelfRateSummary> self_rate_summary(
    const Corpus& corpus, const std::vector<std::pair<std::string, std::vector<JournalIndex>>>& groups,
    YearWindow years);

/// level,group,year,kind,mean,ci_low,ci_high,n
void write_self_rates_csv(std::span<const SelfRateSummary> rows, const std::filesystem::path& path);

}  // namespace citenet
