#include "citenet/centrality.hpp"

#include <fmt/format.h>

#include <cmath>
#include <deque>

#include "citenet/csv.hpp"
#include "citenet/parallel.hpp"

namespace citenet {

namespace {

constexpr std::size_t kChunk = 16;
constexpr int kUnreached = -1;

// Runs body(item, partial) for items in fixed chunks and sums the partial
// vectors in chunk order.
template <class Body>
Eigen::VectorXd chunked_sum(std::size_t items, std::size_t n, std::size_t threads, Body body) {
  const std::size_t chunks = (items + kChunk - 1) / kChunk;
  std::vector<Eigen::VectorXd> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    partial[c] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const std::size_t end = std::min(items, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) body(i, partial[c]);
  });
  Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& p : partial) total += p;
  return total;
}

// BFS recording distances and shortest-path counts. `forward` walks
// successors, otherwise predecessors. The edge (skip_from -> skip_to) is
// ignored when skip_from != kNoIndex.
void bfs_counts(const Digraph& g, std::uint32_t source, bool forward, std::uint32_t skip_from, std::uint32_t skip_to,
                std::vector<int>& dist, std::vector<double>& sigma, std::vector<std::uint32_t>& order) {
  std::fill(dist.begin(), dist.end(), kUnreached);
  std::fill(sigma.begin(), sigma.end(), 0.0);
  order.clear();
  dist[source] = 0;
  sigma[source] = 1.0;
  order.push_back(source);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto v = order[head];
    const auto next = forward ? g.successors(v) : g.predecessors(v);
    for (auto w : next) {
      const bool skipped = forward ? (v == skip_from && w == skip_to) : (w == skip_from && v == skip_to);
      if (skipped) continue;
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        order.push_back(w);
      }
      if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
    }
  }
}

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::betweenness: return "BC";
    case Metric::closeness: return "CC";
    case Metric::pagerank: return "PR";
    case Metric::pathcore: return "PathCore";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (auto m : kAllMetrics)
    if (metric_name(m) == name) return m;
  throw Error(fmt::format("unknown centrality metric '{}'", name));
}

Eigen::VectorXd betweenness(const Digraph& g, std::size_t threads) {
  const std::size_t n = g.node_count();
  return chunked_sum(n, n, threads, [&](std::size_t s, Eigen::VectorXd& bc) {
    std::vector<int> dist(n);
    std::vector<double> sigma(n), delta(n, 0.0);
    std::vector<std::uint32_t> order;
    bfs_counts(g, static_cast<std::uint32_t>(s), true, kNoIndex, kNoIndex, dist, sigma, order);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (auto v : g.predecessors(w))
        if (dist[v] != kUnreached && dist[v] + 1 == dist[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  });
}

Eigen::VectorXd closeness(const Digraph& g, std::size_t threads) {
  const std::size_t n = g.node_count();
  Eigen::VectorXd cc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  parallel_for(n, threads, [&](std::size_t v) {
    std::vector<int> dist(n);
    std::vector<double> sigma(n);
    std::vector<std::uint32_t> order;
    bfs_counts(g, static_cast<std::uint32_t>(v), false, kNoIndex, kNoIndex, dist, sigma, order);
    double total = 0.0;
    for (std::size_t k = 1; k < order.size(); ++k) total += 1.0 / dist[order[k]];
    cc[static_cast<Eigen::Index>(v)] = total;
  });
  return cc;
}

Eigen::VectorXd pagerank(const Digraph& g, const PageRankOptions& options) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (n == 0) return {};
  const double d = options.damping;
  const Eigen::SparseMatrix<double> transposed = g.weights().transpose();
  const Eigen::VectorXd strength = g.weights() * Eigen::VectorXd::Ones(n);
  const Eigen::ArrayXd dangling = (strength.array() <= 0.0).cast<double>();
  const Eigen::VectorXd inv_strength = (strength.array() > 0.0).select(strength.array().inverse(), 0.0);

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  double residual = 0.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const double dangling_mass = (x.array() * dangling).sum();
    Eigen::VectorXd y = d * (transposed * x.cwiseProduct(inv_strength));
    y.array() += (d * dangling_mass + 1.0 - d) / static_cast<double>(n);
    residual = (y - x).lpNorm<1>();
    x = std::move(y);
    if (residual < options.tolerance) return x / x.sum();
  }
  throw Error(fmt::format("PageRank did not converge after {} iterations (residual {})", options.max_iterations,
                          residual));
}

Eigen::VectorXd pathcore(const Digraph& g, std::size_t threads) {
  const std::size_t n = g.node_count();
  const auto edges = g.skeleton_edges();
  Eigen::VectorXd score = chunked_sum(edges.size(), n, threads, [&](std::size_t e, Eigen::VectorXd& out) {
    const auto [u, v] = edges[e];
    std::vector<int> du(n), dv(n);
    std::vector<double> su(n), sv(n);
    std::vector<std::uint32_t> order;
    bfs_counts(g, u, true, u, v, du, su, order);
    if (du[v] == kUnreached) return;
    bfs_counts(g, v, false, u, v, dv, sv, order);
    const int length = du[v];
    for (std::uint32_t w = 0; w < n; ++w) {
      if (w == u || w == v || du[w] == kUnreached || dv[w] == kUnreached) continue;
      if (du[w] + dv[w] == length) out[w] += su[w] * sv[w] / su[v];
    }
  });
  const double top = score.size() > 0 ? score.maxCoeff() : 0.0;
  if (top > 0.0) score /= top;
  return score;
}

std::optional<double> CentralityVector::score(JournalIndex journal) const {
  if (!network) return std::nullopt;
  const auto node = network->node_of(journal);
  if (node == kNoIndex) return std::nullopt;
  return scores[node];
}

CentralityVector compute_centrality(const JournalCitationNetwork& network, Metric metric, std::size_t threads,
                                    const PageRankOptions& pr) {
  if (network.empty()) throw Error(fmt::format("centrality on empty network for {}", network.year));
  CentralityVector v;
  v.network = &network;
  v.metric = metric;
  switch (metric) {
    case Metric::betweenness: v.scores = betweenness(network.graph, threads); break;
    case Metric::closeness: v.scores = closeness(network.graph, threads); break;
    case Metric::pagerank: v.scores = pagerank(network.graph, pr); break;
    case Metric::pathcore: v.scores = pathcore(network.graph, threads); break;
  }
  return v;
}

ComparisonReport centrality_comparison(const Corpus& corpus, std::span<const MatchRecord> matches,
                                       std::span<const CentralityVector> vectors) {
  ComparisonReport report;
  if (!vectors.empty() && vectors.front().network) {
    report.year = vectors.front().network->year;
    report.window_years = vectors.front().network->window_years;
    report.link_type = vectors.front().network->link_type;
  }
  for (const auto& vec : vectors) {
    MetricComparison mc;
    mc.metric = vec.metric;
    for (const auto& m : matches) {
      if (!m.uj) {
        ++mc.missing;
        continue;
      }
      const auto qj = corpus.find_journal(m.qj_id);
      const auto uj = corpus.find_journal(m.uj_id);
      std::optional<double> qs, us;
      if (qj) qs = vec.score(*qj);
      if (uj) us = vec.score(*uj);
      if (!qs || !us) {
        ++mc.missing;
        continue;
      }
      ++mc.pairs;
      if (*us > *qs) ++mc.uj_higher;
      if (*us > 0.0 && *qs > 0.0) mc.log_differences.push_back(std::log10(*us) - std::log10(*qs));
    }
    report.metrics.push_back(std::move(mc));
  }
  return report;
}

std::string centrality_file_name(Metric metric, int year, int window_years, LinkType type) {
  return fmt::format("centrality_{}_{}_{}{}.csv", metric_name(metric), year, window_years, link_type_name(type));
}

void write_centrality_csv(const Corpus& corpus, const CentralityVector& v, const std::filesystem::path& path) {
  csv::Writer w({"journal_id", "score"});
  for (std::size_t k = 0; k < v.network->nodes.size(); ++k) {
    w.cell(corpus.journal(v.network->nodes[k]).id).cell(v.scores[static_cast<Eigen::Index>(k)]);
    w.end_row();
  }
  w.save(path);
}

void write_comparison_csv(std::span<const ComparisonReport> reports, const std::filesystem::path& path) {
  csv::Writer w({"year", "window", "link_type", "metric", "pairs", "uj_higher", "missing", "fraction"});
  for (const auto& r : reports)
    for (const auto& m : r.metrics) {
      w.cell(r.year).cell(r.window_years).cell(link_type_name(r.link_type)).cell(metric_name(m.metric));
      w.cell(m.pairs).cell(m.uj_higher).cell(m.missing).cell(m.fraction());
      w.end_row();
    }
  w.save(path);
}

void write_log_difference_csv(std::span<const ComparisonReport> reports, const std::filesystem::path& path) {
  csv::Writer w({"year", "window", "link_type", "metric", "log_difference"});
  for (const auto& r : reports)
    for (const auto& m : r.metrics)
      for (double x : m.log_differences) {
        w.cell(r.year).cell(r.window_years).cell(link_type_name(r.link_type)).cell(metric_name(m.metric)).cell(x);
        w.end_row();
      }
  w.save(path);
}

}  // namespace citenet
