#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citenet/corpus.hpp"

namespace citenet {

struct SimilarityWeights {
  double w_self_citation = 1.0;
  double w_shared_author = 0.5;
  double w_shared_citation = 0.2;
  double w_shared_reference = 0.2;
  double pair_threshold = 1.0;
  double group_threshold = 0.19;

  void validate() const;
};

/// Blocking key: case-folded, Latin diacritics removed, whitespace
/// collapsed, "surname, initials". "José  A. García" -> "garcia, ja".
std::string normalize_author_name(std::string_view name);

/// Weighted sum of: whether either paper cites the other, the number of
/// shared normalized author names (excluding `block_name` when given), the
/// number of shared citing papers and of shared references.
double paper_similarity(const Corpus& corpus, PaperIndex p1, PaperIndex p2, const SimilarityWeights& weights,
                        std::string_view block_name = {});

struct Mention {
  std::string author_key;
  PaperIndex paper = kNoIndex;
  bool operator==(const Mention&) const = default;
};

struct AuthorClusters {
  std::vector<std::vector<Mention>> clusters;  // indexed by cluster id
  std::vector<std::string> block;              // normalized name of each cluster
  /// Singleton clusters whose only paper is single-authored and uncited.
  std::vector<Mention> excluded;
};

/// Step 1 joins mentions of one name block whose similarity exceeds
/// pair_threshold (transitively). Step 2 repeatedly merges the pair of
/// groups with the highest average pairwise similarity while it exceeds
/// group_threshold; ties go to the pair with the smallest member indices.
/// Blocks are processed in name order, so cluster ids are deterministic.
AuthorClusters disambiguate(const Corpus& corpus, const SimilarityWeights& weights, std::size_t threads = 1);

/// Groups of mention indices for one block, given its pairwise similarity
/// matrix (row-major, size m*m). Exposed for testing.
std::vector<std::vector<std::size_t>> cluster_block(std::span<const double> similarity, std::size_t m,
                                                    double pair_threshold, double group_threshold);

struct AuthorStats {
  std::size_t cluster_id = 0;
  int academic_age = 0;
  std::size_t paper_count = 0;
  std::size_t group_paper_count = 0;
  double self_cited_fraction = 0.0;   // own papers cited by the author's other papers
  double self_citing_fraction = 0.0;  // own papers citing the author's other papers
  /// Own papers cited by / citing any paper of a journal in the group.
  std::size_t group_self_cited = 0;
  std::size_t group_self_citing = 0;
  /// Own group papers cited by / citing the author's other papers.
  std::size_t group_own_self_cited = 0;
  std::size_t group_own_self_citing = 0;
};

/// Statistics for clusters with at least one paper in the journal group.
std::vector<AuthorStats> author_demographics(const Corpus& corpus, const AuthorClusters& clusters,
                                             std::span<const JournalIndex> group);
/// Group = every journal whose questionable flag equals `questionable_group`.
std::vector<AuthorStats> author_demographics(const Corpus& corpus, const AuthorClusters& clusters,
                                             bool questionable_group);

/// cluster_id,author_key,paper_id
void write_clusters_csv(const Corpus& corpus, const AuthorClusters& clusters, const std::filesystem::path& path);
/// group,cluster_id,academic_age,paper_count,group_paper_count,self_cited_fraction,self_citing_fraction,
/// group_self_cited,group_self_citing,group_own_self_cited,group_own_self_citing
void write_author_stats_csv(std::span<const AuthorStats> questionable, std::span<const AuthorStats> unquestioned,
                            const std::filesystem::path& path);

}  // namespace citenet
