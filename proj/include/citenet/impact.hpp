#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"

namespace citenet {

/// Exact citations-per-paper quotient.
struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// Citations made in `year` to the journal's papers from the two prior
/// years, over the number of those papers. nullopt when the journal
/// published nothing in that window.
std::optional<Ratio> journal_impact(const Corpus& corpus, JournalIndex journal, int year);

/// Article counts of the top-cited field per year, used to deflate citation
/// counts to a common reference year.
struct NormalizationTable {
  int reference_year = 2017;
  std::string field;  // informational; empty when loaded from a file without it
  std::map<int, double> top_field_articles;

  /// Top-cited field = the 2-digit category whose journals received the most
  /// citations made during the reference year (ties: smaller code).
  static NormalizationTable from_corpus(const Corpus& corpus, int reference_year = 2017);
  /// CSV with columns reference_year,year,n_top.
  static NormalizationTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  bool contains(int year) const { return top_field_articles.contains(year); }
};

/// count / (N_top(year) / N_top(reference_year)). Throws Error if the year
/// is missing from the table.
double normalize_citations(double count, int year, const NormalizationTable& table);

std::optional<double> immediacy_index(const Corpus& corpus, JournalIndex journal, int year);

/// Median age of citations received by the journal's papers published in `year`.
std::optional<double> cited_half_life(const Corpus& corpus, JournalIndex journal, int year);
/// Median age of references made by the journal's papers published in `year`.
std::optional<double> citing_half_life(const Corpus& corpus, JournalIndex journal, int year);

/// Share of the year's articles with known publisher that belong to `publisher`.
std::optional<double> market_share(const Corpus& corpus, PublisherIndex publisher, int year);

struct ImpactRecord {
  JournalIndex journal = kNoIndex;
  int year = 0;
  std::optional<Ratio> impact;
  std::optional<double> normalized_impact;
  std::optional<double> immediacy;
  std::optional<double> cited_half_life;
  std::optional<double> citing_half_life;
  std::size_t eligible_paper_count = 0;

  bool any_defined() const {
    return impact || immediacy || cited_half_life || citing_half_life;
  }
};

ImpactRecord impact_record(const Corpus& corpus, JournalIndex journal, int year,
                           const NormalizationTable* table);

/// Every (journal, year) in `years` with at least one defined metric,
/// ordered by journal then year.
std::vector<ImpactRecord> impact_table(const Corpus& corpus, YearWindow years,
                                       const NormalizationTable* table, std::size_t threads = 1);

void write_impact_csv(const Corpus& corpus, const std::vector<ImpactRecord>& records,
                      const std::filesystem::path& path);

/// Impact values as read back from impact.csv.
struct ImpactEntry {
  std::optional<double> impact;
  std::optional<double> normalized_impact;
};
using ImpactLookup = std::map<std::pair<std::string, int>, ImpactEntry>;

ImpactLookup read_impact_csv(const std::filesystem::path& path);

void write_market_share_csv(const Corpus& corpus, YearWindow years, const std::filesystem::path& path);

}  // namespace citenet
