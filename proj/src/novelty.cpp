#include "citenet/novelty.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>
#include <unordered_set>

#include "citenet/csv.hpp"
#include "citenet/parallel.hpp"
#include "citenet/random.hpp"
#include "citenet/stats.hpp"

namespace citenet {

namespace {

std::uint64_t edge_key(PaperIndex a, PaperIndex b) { return (std::uint64_t{a} << 32) | b; }

// Journal of every reference of each paper, in edge order. Papers without
// a journal are skipped.
std::vector<std::vector<JournalIndex>> reference_journals(const Corpus& corpus, const EdgeList& edges) {
  std::vector<std::vector<JournalIndex>> lists(corpus.papers().size());
  for (const auto& e : edges) {
    const auto j = corpus.paper(e.cited).journal;
    if (j != kNoIndex) lists[e.citing].push_back(j);
  }
  return lists;
}

// Calls fn(pair, count) for the journal pairs of one reference list.
template <class Fn>
void for_each_pair(std::vector<JournalIndex> journals, bool collapse, Fn&& fn) {
  std::sort(journals.begin(), journals.end());
  std::vector<std::pair<JournalIndex, double>> runs;
  for (auto j : journals) {
    if (!runs.empty() && runs.back().first == j)
      runs.back().second += 1.0;
    else
      runs.emplace_back(j, 1.0);
  }
  for (std::size_t a = 0; a < runs.size(); ++a) {
    const auto [ja, ma] = runs[a];
    if (ma >= 2.0) fn(JournalPair{ja, ja}, collapse ? 1.0 : ma * (ma - 1.0) / 2.0);
    for (std::size_t b = a + 1; b < runs.size(); ++b) fn(JournalPair{ja, runs[b].first}, collapse ? 1.0 : ma * runs[b].second);
  }
}

}  // namespace

EdgeList citation_edges(const Corpus& corpus) {
  EdgeList edges;
  edges.reserve(corpus.edge_count());
  for (PaperIndex p = 0; p < corpus.papers().size(); ++p)
    for (auto r : corpus.references(p)) edges.push_back({p, r});
  return edges;
}

void ShuffleConfig::validate() const {
  if (ensemble_count < 1) throw Error("ensemble_count must be at least 1");
  if (!(swaps_per_edge > 0.0)) throw Error("swaps_per_edge must be positive");
}

ShuffleResult shuffle_citations(const Corpus& corpus, const ShuffleConfig& config, std::size_t replicate_index) {
  return shuffle_citations(corpus, citation_edges(corpus), config, replicate_index);
}

ShuffleResult shuffle_citations(const Corpus& corpus, const EdgeList& edges, const ShuffleConfig& config,
                                std::size_t replicate_index) {
  config.validate();
  ShuffleResult result;
  result.edges = edges;
  auto& out = result.edges;

  std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < out.size(); ++i)
    strata[{corpus.paper(out[i].citing).year, corpus.paper(out[i].cited).year}].push_back(i);

  std::unordered_set<std::uint64_t> present;
  present.reserve(out.size() * 2);
  for (const auto& e : out) present.insert(edge_key(e.citing, e.cited));

  auto rng = make_rng(config.seed, replicate_index);
  for (const auto& [years, members] : strata) {
    if (members.size() < 2) {
      result.untouched_strata.push_back(years);
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    const auto attempts =
        static_cast<std::size_t>(std::llround(config.swaps_per_edge * static_cast<double>(members.size())));
    for (std::size_t t = 0; t < attempts; ++t) {
      auto& e1 = out[members[pick(rng)]];
      auto& e2 = out[members[pick(rng)]];
      ++result.attempted_swaps;
      if (e1.citing == e2.citing || e1.cited == e2.cited) continue;
      if (e1.citing == e2.cited || e2.citing == e1.cited) continue;
      if (present.count(edge_key(e1.citing, e2.cited)) || present.count(edge_key(e2.citing, e1.cited))) continue;
      present.erase(edge_key(e1.citing, e1.cited));
      present.erase(edge_key(e2.citing, e2.cited));
      std::swap(e1.cited, e2.cited);
      present.insert(edge_key(e1.citing, e1.cited));
      present.insert(edge_key(e2.citing, e2.cited));
      ++result.accepted_swaps;
    }
  }
  return result;
}

PairCounts pair_counts(const Corpus& corpus, const EdgeList& edges, bool collapse) {
  PairCounts counts;
  for (auto& list : reference_journals(corpus, edges))
    for_each_pair(std::move(list), collapse, [&](JournalPair p, double c) { counts[p] += c; });
  return counts;
}

PairZScores pair_zscores(const Corpus& corpus, std::span<const EdgeList> ensemble, bool collapse) {
  if (ensemble.empty()) throw Error("pair_zscores needs at least one ensemble member");
  PairZScores result;
  for (const auto& [pair, o] : pair_counts(corpus, citation_edges(corpus), collapse))
    result.pairs.emplace(pair, PairStatistics{pair, o, 0.0, 0.0, std::nullopt});

  std::vector<JournalPair> keys;
  keys.reserve(result.pairs.size());
  for (const auto& [pair, _] : result.pairs) keys.push_back(pair);
  std::vector<std::vector<double>> samples(keys.size(), std::vector<double>(ensemble.size(), 0.0));
  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    const auto counts = pair_counts(corpus, ensemble[r], collapse);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      auto it = counts.find(keys[k]);
      if (it != counts.end()) samples[k][r] = it->second;
    }
  }
  for (std::size_t k = 0; k < keys.size(); ++k) {
    auto& s = result.pairs[keys[k]];
    s.e = *stats::mean(samples[k]);
    s.sigma = *stats::stddev(samples[k]);
    if (s.sigma > 0.0)
      s.z = (s.o - s.e) / s.sigma;
    else
      ++result.undefined_count;
  }
  return result;
}

PairZScores pair_zscores(const Corpus& corpus, const ShuffleConfig& config, std::size_t threads,
                         std::vector<std::string>* log) {
  config.validate();
  const auto edges = citation_edges(corpus);
  std::vector<ShuffleResult> replicates(static_cast<std::size_t>(config.ensemble_count));
  parallel_for(replicates.size(), threads,
               [&](std::size_t r) { replicates[r] = shuffle_citations(corpus, edges, config, r); });
  std::vector<EdgeList> ensemble;
  ensemble.reserve(replicates.size());
  for (std::size_t r = 0; r < replicates.size(); ++r) {
    if (log && r == 0)
      for (const auto& [cy, dy] : replicates[r].untouched_strata)
        log->push_back(fmt::format("stratum citing {} / cited {} has fewer than two edges; left unshuffled", cy, dy));
    ensemble.push_back(std::move(replicates[r].edges));
  }
  return pair_zscores(corpus, ensemble, config.collapse_pairs);
}

PaperNovelty paper_novelty(const Corpus& corpus, PaperIndex paper, const PairZScores& zmap, bool collapse) {
  PaperNovelty result;
  result.paper = paper;
  std::vector<JournalIndex> journals;
  for (auto r : corpus.references(paper)) {
    const auto j = corpus.paper(r).journal;
    if (j != kNoIndex) journals.push_back(j);
  }
  std::vector<double> zs;
  for_each_pair(std::move(journals), collapse, [&](JournalPair p, double count) {
    const auto* s = zmap.find(p);
    const auto n = static_cast<std::size_t>(count);
    if (s && s->z) {
      zs.insert(zs.end(), n, *s->z);
      result.defined_pair_count += n;
    } else {
      result.undefined_pair_count += n;
    }
  });
  result.median_z = stats::median(zs);
  result.p10_z = stats::percentile(std::move(zs), 10.0);
  return result;
}

std::vector<PaperNovelty> novelty_table(const Corpus& corpus, const PairZScores& zmap, bool collapse) {
  std::vector<PaperNovelty> rows;
  for (PaperIndex p = 0; p < corpus.papers().size(); ++p) {
    if (corpus.references(p).size() < 2) continue;
    rows.push_back(paper_novelty(corpus, p, zmap, collapse));
  }
  return rows;
}

void write_novelty_csv(const Corpus& corpus, std::span<const PaperNovelty> rows, const std::filesystem::path& path) {
  csv::Writer w({"paper_id", "median_z", "p10_z", "defined_pair_count", "undefined_pair_count"});
  for (const auto& r : rows) {
    w.cell(corpus.paper(r.paper).id).cell(r.median_z).cell(r.p10_z).cell(r.defined_pair_count).cell(r.undefined_pair_count);
    w.end_row();
  }
  w.save(path);
}

}  // namespace citenet
