#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "citenet/corpus.hpp"

namespace citenet {

struct DisruptionCounts {
  PaperIndex paper = kNoIndex;
  std::size_t n_i = 0;  // cite the paper but none of its references
  std::size_t n_j = 0;  // cite the paper and at least one reference
  std::size_t n_k = 0;  // cite a reference but not the paper

  /// (n_i - n_j) / (n_i + n_j + n_k), undefined for a zero denominator.
  std::optional<double> index() const;
};

/// Counts over citing papers whose year lies in `citer_years`.
DisruptionCounts disruption_counts(const Corpus& corpus, PaperIndex paper,
                                   YearWindow citer_years = YearWindow::all());
std::optional<double> disruptiveness(const Corpus& corpus, PaperIndex paper,
                                     YearWindow citer_years = YearWindow::all());

struct DisruptionRecord {
  DisruptionCounts counts;
  std::optional<double> d;
  std::size_t author_count = 0;
  int year = 0;
  JournalIndex journal = kNoIndex;
};

std::vector<DisruptionRecord> disruption_table(const Corpus& corpus, YearWindow citer_years = YearWindow::all(),
                                               std::size_t threads = 1);

/// Mean D per key over records with a defined index.
struct GroupMeans {
  std::map<long long, double> mean;
  std::map<long long, std::size_t> count;
  std::size_t undefined = 0;  // records skipped for an undefined index
};

GroupMeans disruptiveness_by_team_size(std::span<const DisruptionRecord> records);
GroupMeans disruptiveness_by_year(std::span<const DisruptionRecord> records);
/// Keyed by journal index; papers without a journal are skipped.
GroupMeans disruptiveness_by_journal(std::span<const DisruptionRecord> records);

/// paper_id,n_i,n_j,n_k,D,author_count,year
void write_disruption_csv(const Corpus& corpus, std::span<const DisruptionRecord> rows,
                          const std::filesystem::path& path);

}  // namespace citenet
