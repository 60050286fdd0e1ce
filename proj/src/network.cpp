#include "citenet/network.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "citenet/csv.hpp"

namespace citenet {

Digraph::Digraph(std::size_t node_count, std::span<const Edge> edges) : n_(node_count) {
  const auto n = static_cast<Eigen::Index>(node_count);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.from >= node_count || e.to >= node_count) throw Error("digraph edge endpoint out of range");
    triplets.emplace_back(e.from, e.to, e.weight);
  }
  weights_.resize(n, n);
  weights_.setFromTriplets(triplets.begin(), triplets.end());
  weights_.makeCompressed();

  std::vector<std::size_t> out_degree(node_count, 0), in_degree(node_count, 0);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Weights::InnerIterator it(weights_, u); it; ++it)
      if (it.col() != u && it.value() > 0) {
        ++out_degree[u];
        ++in_degree[it.col()];
      }
  out_offsets_.assign(node_count + 1, 0);
  in_offsets_.assign(node_count + 1, 0);
  for (std::size_t v = 0; v < node_count; ++v) {
    out_offsets_[v + 1] = out_offsets_[v] + out_degree[v];
    in_offsets_[v + 1] = in_offsets_[v] + in_degree[v];
  }
  out_.resize(out_offsets_.back());
  in_.resize(in_offsets_.back());
  auto out_cursor = out_offsets_;
  auto in_cursor = in_offsets_;
  for (Eigen::Index u = 0; u < n; ++u)
    for (Weights::InnerIterator it(weights_, u); it; ++it)
      if (it.col() != u && it.value() > 0) {
        out_[out_cursor[u]++] = static_cast<std::uint32_t>(it.col());
        in_[in_cursor[it.col()]++] = static_cast<std::uint32_t>(u);
      }
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Digraph::skeleton_edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(out_.size());
  for (std::uint32_t u = 0; u < n_; ++u)
    for (auto v : successors(u)) edges.emplace_back(u, v);
  return edges;
}

std::string_view link_type_name(LinkType t) { return t == LinkType::citation ? "citation" : "reference"; }

std::uint32_t JournalCitationNetwork::node_of(JournalIndex journal) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), journal);
  if (it == nodes.end() || *it != journal) return kNoIndex;
  return static_cast<std::uint32_t>(it - nodes.begin());
}

JournalCitationNetwork build_journal_network(const Corpus& corpus, int year, int window_years, LinkType link_type) {
  if (window_years < 1) throw Error("network window must be at least one year");
  const auto range = corpus.year_range();
  if (link_type == LinkType::citation && (!range.contains(year) || year + window_years > range.last))
    throw Error(fmt::format("citation window {}..{} leaves corpus range [{}, {}]", year + 1, year + window_years,
                            range.first, range.last));
  if (link_type == LinkType::reference && (!range.contains(year) || year - window_years < range.first))
    throw Error(fmt::format("reference window {}..{} leaves corpus range [{}, {}]", year - window_years, year - 1,
                            range.first, range.last));

  JournalCitationNetwork net;
  net.year = year;
  net.window_years = window_years;
  net.link_type = link_type;

  std::map<std::pair<JournalIndex, JournalIndex>, double> weights;
  std::vector<char> present(corpus.journals().size(), 0);
  for (JournalIndex j = 0; j < corpus.journals().size(); ++j)
    if (corpus.journal(j).paper_count(year) > 0) present[j] = 1;

  const auto n = static_cast<PaperIndex>(corpus.papers().size());
  for (PaperIndex p = 0; p < n; ++p) {
    const auto& paper = corpus.paper(p);
    if (paper.year != year || paper.journal == kNoIndex) continue;
    if (link_type == LinkType::citation) {
      for (auto c : corpus.citers(p)) {
        const auto& citer = corpus.paper(c);
        if (citer.journal == kNoIndex || citer.year <= year || citer.year > year + window_years) continue;
        weights[{citer.journal, paper.journal}] += 1.0;
        present[citer.journal] = 1;
      }
    } else {
      for (auto r : corpus.references(p)) {
        const auto& cited = corpus.paper(r);
        if (cited.journal == kNoIndex || cited.year >= year || cited.year < year - window_years) continue;
        weights[{paper.journal, cited.journal}] += 1.0;
        present[cited.journal] = 1;
      }
    }
  }

  for (JournalIndex j = 0; j < present.size(); ++j)
    if (present[j]) net.nodes.push_back(j);
  std::vector<Digraph::Edge> edges;
  edges.reserve(weights.size());
  for (const auto& [key, w] : weights) edges.push_back({net.node_of(key.first), net.node_of(key.second), w});
  net.graph = Digraph(net.nodes.size(), edges);
  if (net.empty()) net.warnings.push_back(fmt::format("no journals published in {}", year));
  return net;
}

void write_edge_list_csv(const Corpus& corpus, const JournalCitationNetwork& network, const std::filesystem::path& path) {
  csv::Writer w({"citing_id", "cited_id", "weight"});
  const auto& weights = network.graph.weights();
  for (Eigen::Index u = 0; u < weights.outerSize(); ++u)
    for (Digraph::Weights::InnerIterator it(weights, u); it; ++it) {
      w.cell(corpus.journal(network.nodes[u]).id).cell(corpus.journal(network.nodes[it.col()]).id).cell(it.value());
      w.end_row();
    }
  w.save(path);
}

}  // namespace citenet
