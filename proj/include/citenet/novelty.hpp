#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "citenet/corpus.hpp"

namespace citenet {

struct CitationEdge {
  PaperIndex citing = kNoIndex;
  PaperIndex cited = kNoIndex;
  bool operator==(const CitationEdge&) const = default;
};
using EdgeList = std::vector<CitationEdge>;

/// Resolved citation edges ordered by citing paper, then cited paper.
EdgeList citation_edges(const Corpus& corpus);

struct ShuffleConfig {
  int ensemble_count = 10;
  double swaps_per_edge = 10.0;
  std::uint64_t seed = 0;
  /// Count a journal pair at most once per reference list.
  bool collapse_pairs = false;

  void validate() const;
};

struct ShuffleResult {
  EdgeList edges;
  std::size_t attempted_swaps = 0;
  std::size_t accepted_swaps = 0;
  /// (citing year, cited year) strata with fewer than two edges.
  std::vector<std::pair<int, int>> untouched_strata;
};

/// Double-edge swaps within each (citing year, cited year) stratum:
/// (a->b, c->d) becomes (a->d, c->b) unless that creates a self citation or
/// a duplicate edge. Each stratum gets round(swaps_per_edge * size) attempts.
/// Replicate r draws from stream r of config.seed.
ShuffleResult shuffle_citations(const Corpus& corpus, const ShuffleConfig& config, std::size_t replicate_index);
ShuffleResult shuffle_citations(const Corpus& corpus, const EdgeList& edges, const ShuffleConfig& config,
                                std::size_t replicate_index);

/// Unordered journal pair, first <= second.
using JournalPair = std::pair<JournalIndex, JournalIndex>;
inline JournalPair make_journal_pair(JournalIndex a, JournalIndex b) {
  return a <= b ? JournalPair{a, b} : JournalPair{b, a};
}
struct JournalPairHash {
  std::size_t operator()(const JournalPair& p) const {
    return std::hash<std::uint64_t>{}((std::uint64_t{p.first} << 32) | p.second);
  }
};

/// Journal-pair co-reference counts of an edge list. Without collapsing,
/// every pair of reference instances in a list counts once, so a journal
/// cited m times contributes m(m-1)/2 same-journal pairs.
using PairCounts = std::unordered_map<JournalPair, double, JournalPairHash>;
PairCounts pair_counts(const Corpus& corpus, const EdgeList& edges, bool collapse = false);

struct PairStatistics {
  JournalPair pair;
  double o = 0.0;
  double e = 0.0;
  double sigma = 0.0;        // population std over the ensemble
  std::optional<double> z;   // undefined when sigma == 0
};

struct PairZScores {
  std::unordered_map<JournalPair, PairStatistics, JournalPairHash> pairs;
  std::size_t undefined_count = 0;

  const PairStatistics* find(JournalPair p) const {
    auto it = pairs.find(p);
    return it == pairs.end() ? nullptr : &it->second;
  }
};

/// z-scores of the observed pairs against an explicit ensemble of edge lists.
PairZScores pair_zscores(const Corpus& corpus, std::span<const EdgeList> ensemble, bool collapse = false);
/// Builds config.ensemble_count shuffled replicates, in parallel.
PairZScores pair_zscores(const Corpus& corpus, const ShuffleConfig& config, std::size_t threads = 1,
                         std::vector<std::string>* log = nullptr);

struct PaperNovelty {
  PaperIndex paper = kNoIndex;
  std::optional<double> median_z;
  std::optional<double> p10_z;
  std::size_t defined_pair_count = 0;
  std::size_t undefined_pair_count = 0;
};

/// Median and 10th percentile of the z-scores of the paper's reference
/// pairs; pairs with undefined z are only counted.
PaperNovelty paper_novelty(const Corpus& corpus, PaperIndex paper, const PairZScores& zmap, bool collapse = false);

std::vector<PaperNovelty> novelty_table(const Corpus& corpus, const PairZScores& zmap, bool collapse = false);

/// paper_id,median_z,p10_z,defined_pair_count,undefined_pair_count
void write_novelty_csv(const Corpus& corpus, std::span<const PaperNovelty> rows, const std::filesystem::path& path);

}  // namespace citenet
