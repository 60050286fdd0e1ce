#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "citenet/matching.hpp"
#include "citenet/network.hpp"

namespace citenet {

enum class Metric { betweenness, closeness, pagerank, pathcore };
inline constexpr Metric kAllMetrics[] = {Metric::betweenness, Metric::closeness, Metric::pagerank, Metric::pathcore};
/// "BC", "CC", "PR", "PathCore"
std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

/// Directed shortest-path betweenness on the unweighted skeleton (Brandes),
/// unnormalized. Sources are processed in fixed chunks and reduced in chunk
/// order, so the result does not depend on `threads`.
Eigen::VectorXd betweenness(const Digraph& g, std::size_t threads = 1);

/// Harmonic closeness over incoming paths: CC(v) = sum over u != v of
/// 1 / d(u, v), unreachable pairs contributing 0.
Eigen::VectorXd closeness(const Digraph& g, std::size_t threads = 1);

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  // L1 change between iterates
  int max_iterations = 10000;
};
/// Weighted PageRank; self-loops count as links, dangling mass is spread
/// uniformly. Throws Error (with the residual) if it fails to converge.
Eigen::VectorXd pagerank(const Digraph& g, const PageRankOptions& options = {});

/// Path-Core score (Cucuringu et al.): for every skeleton edge (u, v) the
/// edge is removed and each w outside {u, v} receives the fraction of
/// shortest u->v paths of the remaining graph that pass through w. Totals
/// are divided by their maximum, so scores lie in [0, 1].
Eigen::VectorXd pathcore(const Digraph& g, std::size_t threads = 1);

/// Scores of one metric on one journal network.
struct CentralityVector {
  const JournalCitationNetwork* network = nullptr;
  Metric metric = Metric::betweenness;
  Eigen::VectorXd scores;  // indexed like network->nodes

  /// Score of a journal, or nullopt if it is not a node.
  std::optional<double> score(JournalIndex journal) const;
};

CentralityVector compute_centrality(const JournalCitationNetwork& network, Metric metric, std::size_t threads = 1,
                                    const PageRankOptions& pr = {});

struct MetricComparison {
  Metric metric = Metric::betweenness;
  std::size_t pairs = 0;      // pairs with both scores present
  std::size_t uj_higher = 0;  // strictly higher UJ score
  std::size_t missing = 0;    // excluded pairs lacking a score
  /// log10(UJ) - log10(QJ) for pairs where both scores are positive.
  std::vector<double> log_differences;

  std::optional<double> fraction() const {
    if (pairs == 0) return std::nullopt;
    return static_cast<double>(uj_higher) / static_cast<double>(pairs);
  }
};

struct ComparisonReport {
  int year = 0;
  int window_years = 0;
  LinkType link_type = LinkType::citation;
  std::vector<MetricComparison> metrics;
};

/// Per metric, the share of matched QJ/UJ pairs whose UJ scores strictly
/// higher. Unmatched records and pairs missing a score are counted as missing.
ComparisonReport centrality_comparison(const Corpus& corpus, std::span<const MatchRecord> matches,
                                       std::span<const CentralityVector> vectors);

/// centrality_<metric>_<year>_<window><type>.csv, e.g. centrality_BC_2016_2citation.csv
std::string centrality_file_name(Metric metric, int year, int window_years, LinkType type);
/// journal_id,score
void write_centrality_csv(const Corpus& corpus, const CentralityVector& v, const std::filesystem::path& path);
/// year,window,link_type,metric,pairs,uj_higher,missing,fraction
void write_comparison_csv(std::span<const ComparisonReport> reports, const std::filesystem::path& path);
/// year,window,link_type,metric,log_difference
void write_log_difference_csv(std::span<const ComparisonReport> reports, const std::filesystem::path& path);

}  // namespace citenet
