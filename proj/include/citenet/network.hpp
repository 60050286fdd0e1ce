#pragma once

#include <Eigen/Sparse>

#include <filesystem>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "citenet/corpus.hpp"

namespace citenet {

/// Weighted directed graph on nodes 0..n-1. The unweighted skeleton used by
/// path metrics drops self-loops; weights (loops included) feed PageRank.
class Digraph {
 public:
  using Weights = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    double weight;
  };

  Digraph() = default;
  Digraph(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return n_; }
  const Weights& weights() const { return weights_; }

  std::span<const std::uint32_t> successors(std::uint32_t v) const {
    return {out_.data() + out_offsets_[v], out_.data() + out_offsets_[v + 1]};
  }
  std::span<const std::uint32_t> predecessors(std::uint32_t v) const {
    return {in_.data() + in_offsets_[v], in_.data() + in_offsets_[v + 1]};
  }
  /// Skeleton edges (u, v), u != v, in row-major order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> skeleton_edges() const;

 private:
  std::size_t n_ = 0;
  Weights weights_;
  std::vector<std::size_t> out_offsets_{0}, in_offsets_{0};
  std::vector<std::uint32_t> out_, in_;
};

enum class LinkType { citation, reference };
std::string_view link_type_name(LinkType t);

/// Yearly journal graph. Citation links: papers published in `year` are
/// cited during the following `window_years` years. Reference links: papers
/// published in `year` cite papers of the preceding `window_years` years.
/// Edges point citing journal -> cited journal, weight = citation count.
struct JournalCitationNetwork {
  int year = 0;
  int window_years = 2;
  LinkType link_type = LinkType::citation;
  std::vector<JournalIndex> nodes;  // sorted; graph node k is journal nodes[k]
  Digraph graph;
  std::vector<std::string> warnings;

  bool empty() const { return nodes.empty(); }
  /// Node position of a journal, or kNoIndex.
  std::uint32_t node_of(JournalIndex journal) const;
};

/// Nodes are the journals active in `year` plus any journal that appears as
/// an edge endpoint. Throws Error when the window leaves the corpus range.
JournalCitationNetwork build_journal_network(const Corpus& corpus, int year, int window_years, LinkType link_type);

/// citing_id,cited_id,weight
void write_edge_list_csv(const Corpus& corpus, const JournalCitationNetwork& network,
                         const std::filesystem::path& path);

}  // namespace citenet
