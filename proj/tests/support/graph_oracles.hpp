#pragma once

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "citenet/network.hpp"

namespace oracle {

using Adjacency = std::vector<std::vector<bool>>;  // a[u][v]: skeleton edge u -> v, no loops
using Paths = std::vector<std::vector<int>>;

struct RandomGraph {
  int n = 0;
  Eigen::MatrixXd w;  // weights, loops allowed
  std::vector<citenet::Digraph::Edge> edges;
  Adjacency adj;
};

inline RandomGraph random_graph(std::mt19937_64& rng, int max_nodes = 8) {
  RandomGraph g;
  g.n = 1 + static_cast<int>(rng() % max_nodes);
  const double p = std::uniform_real_distribution<double>(0.05, 0.7)(rng);
  g.w = Eigen::MatrixXd::Zero(g.n, g.n);
  g.adj.assign(g.n, std::vector<bool>(g.n, false));
  for (int u = 0; u < g.n; ++u)
    for (int v = 0; v < g.n; ++v) {
      if (std::uniform_real_distribution<double>(0, 1)(rng) >= (u == v ? p / 3 : p)) continue;
      const double weight = 1.0 + static_cast<double>(rng() % 4);
      g.w(u, v) = weight;
      g.edges.push_back({std::uint32_t(u), std::uint32_t(v), weight});
      if (u != v) g.adj[u][v] = true;
    }
  return g;
}

inline Adjacency adjacency(const Eigen::MatrixXd& w) {
  Adjacency a(w.rows(), std::vector<bool>(w.rows(), false));
  for (int u = 0; u < w.rows(); ++u)
    for (int v = 0; v < w.rows(); ++v) a[u][v] = u != v && w(u, v) != 0.0;
  return a;
}

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// All-pairs hop distances.
inline std::vector<std::vector<int>> floyd_warshall(const Adjacency& a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (int u = 0; u < n; ++u) {
    d[u][u] = 0;
    for (int v = 0; v < n; ++v)
      if (a[u][v]) d[u][v] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Every simple path s -> t, by depth-first enumeration.
inline Paths simple_paths(const Adjacency& a, int s, int t) {
  Paths out;
  std::vector<int> path{s};
  std::vector<bool> seen(a.size(), false);
  seen[s] = true;
  std::function<void(int)> dfs = [&](int u) {
    if (u == t) {
      out.push_back(path);
      return;
    }
    for (int v = 0; v < static_cast<int>(a.size()); ++v) {
      if (!a[u][v] || seen[v]) continue;
      seen[v] = true;
      path.push_back(v);
      dfs(v);
      path.pop_back();
      seen[v] = false;
    }
  };
  dfs(s);
  return out;
}

inline Paths shortest_paths(const Adjacency& a, int s, int t) {
  auto all = simple_paths(a, s, t);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& p : all) best = std::min(best, p.size());
  Paths out;
  for (auto& p : all)
    if (p.size() == best) out.push_back(std::move(p));
  return out;
}

/// Fraction of shortest s -> t paths through each interior node, summed
/// over ordered pairs.
inline Eigen::VectorXd betweenness(const Adjacency& a) {
  const int n = static_cast<int>(a.size());
  Eigen::VectorXd bc = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      const auto paths = shortest_paths(a, s, t);
      if (paths.empty()) continue;
      for (const auto& p : paths)
        for (std::size_t k = 1; k + 1 < p.size(); ++k) bc(p[k]) += 1.0 / static_cast<double>(paths.size());
    }
  return bc;
}

inline Eigen::VectorXd closeness(const Adjacency& a) {
  const auto d = floyd_warshall(a);
  const int n = static_cast<int>(a.size());
  Eigen::VectorXd cc = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (u != v && d[u][v] < kInf) cc(v) += 1.0 / d[u][v];
  return cc;
}

/// Stationary vector of the Google matrix by a direct dense solve.
inline Eigen::VectorXd pagerank(const Eigen::MatrixXd& w, double damping = 0.85) {
  const auto n = w.rows();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double out = w.row(i).sum();
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = (out > 0 ? damping * w(i, j) / out : damping / double(n)) + (1.0 - damping) / double(n);
  }
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - g.transpose();
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  return system.fullPivLu().solve(rhs);
}

/// For each edge (u, v): remove it, enumerate the shortest u -> v paths of
/// what remains and credit every interior node with its share. Scaled to a
/// maximum of 1.
inline Eigen::VectorXd pathcore(const Adjacency& a) {
  const int n = static_cast<int>(a.size());
  Eigen::VectorXd score = Eigen::VectorXd::Zero(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (!a[u][v]) continue;
      auto cut = a;
      cut[u][v] = false;
      const auto paths = shortest_paths(cut, u, v);
      for (const auto& p : paths)
        for (std::size_t k = 1; k + 1 < p.size(); ++k) score(p[k]) += 1.0 / static_cast<double>(paths.size());
    }
  const double top = score.size() ? score.maxCoeff() : 0.0;
  if (top > 0) score /= top;
  return score;
}

}  // namespace oracle
