#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"
#include "citenet/impact.hpp"

namespace citenet {

/// Journals publishing fewer papers than this in a year are inactive.
inline constexpr std::size_t kMinActivePapers = 30;

enum class Tercile { large, moderate, small };
std::string_view tercile_name(Tercile t);
std::optional<Tercile> parse_tercile(std::string_view name);

/// What matching needs to know about a journal for one year.
struct JournalProfile {
  JournalIndex journal = kNoIndex;
  std::string id;
  std::vector<std::string> categories;
  bool questionable = false;
  std::size_t size = 0;  // papers published in the year
  std::optional<double> impact;

  bool active() const { return size >= kMinActivePapers; }
  bool in_category(const std::string& category) const;
};

/// Size-bin schemes; terciles drive selection, the others exist for the
/// binning diagnostic.
enum class BinScheme { terciles, quartiles, log_sigma };

struct BinAssignment {
  std::map<JournalIndex, int> bins;  // active journals of the category only
  bool degenerate = false;           // too few journals; everything in one bin
};

/// Bins the active journals of `category` by annual volume. Quantile schemes
/// rank by size descending with journal id as tie-break, so bin 0 is the
/// largest. log_sigma splits at mean +/- one std of log10(size), bin 0 above.
BinAssignment assign_bins(std::span<const JournalProfile> profiles, const std::string& category, BinScheme scheme);

struct TercileAssignment {
  std::map<JournalIndex, Tercile> terciles;
  bool degenerate = false;
};

TercileAssignment assign_terciles(std::span<const JournalProfile> profiles, const std::string& category);

enum class ImpactBasis { normalized, raw };

/// Profiles of every journal for `year`, impacts taken from an impact.csv lookup.
std::vector<JournalProfile> journal_profiles(const Corpus& corpus, int year, const ImpactLookup& impacts,
                                             ImpactBasis basis = ImpactBasis::normalized);
/// Profiles with impacts computed directly from the corpus. A null table
/// forces raw impact.
std::vector<JournalProfile> journal_profiles(const Corpus& corpus, int year, const NormalizationTable* table,
                                             ImpactBasis basis = ImpactBasis::normalized);

TercileAssignment size_terciles(const Corpus& corpus, const std::string& category, int year);

struct MatchRecord {
  JournalIndex qj = kNoIndex;
  std::string qj_id;
  std::string category;
  std::optional<JournalIndex> uj;
  std::string uj_id;  // empty when no eligible candidate exists
  std::optional<double> impact_gap;
  std::optional<Tercile> tercile;
};

/// Control selection over a fixed set of journal profiles. Bins are
/// materialized once per category.
class MatchingRegistry {
 public:
  explicit MatchingRegistry(std::vector<JournalProfile> profiles, BinScheme scheme = BinScheme::terciles);

  const std::vector<JournalProfile>& profiles() const { return profiles_; }
  const JournalProfile* find(JournalIndex journal) const;
  const BinAssignment& bins(const std::string& category) const;

  /// One record per category of the questioned journal: the unflagged,
  /// active, same-bin journal with the smallest impact gap (ties: smaller
  /// size difference, then journal id). Empty record when none qualifies.
  std::vector<MatchRecord> select_control(JournalIndex qj) const;

  /// Records for every questionable journal with a defined impact.
  std::vector<MatchRecord> match_all() const;

 private:
  std::vector<JournalProfile> profiles_;
  std::map<JournalIndex, std::size_t> position_;
  std::map<std::string, BinAssignment> bins_;
  BinScheme scheme_;
};

/// Convenience: builds a registry for `year` and selects controls for one journal.
std::vector<MatchRecord> select_control(const Corpus& corpus, JournalIndex qj, int year,
                                        const NormalizationTable* table, ImpactBasis basis = ImpactBasis::normalized);

struct BinningDiagnostic {
  BinScheme scheme = BinScheme::terciles;
  std::size_t matched = 0;
  std::optional<double> mean_impact_gap;
  std::optional<double> mean_size_gap;
};

std::string_view scheme_name(BinScheme scheme);

/// Mean impact and size gaps of the selected controls under each scheme.
std::vector<BinningDiagnostic> binning_diagnostic(const std::vector<JournalProfile>& profiles);

/// Sorted, distinct journals on each side of the matched pairs; records
/// without a control are ignored.
struct MatchedGroups {
  std::vector<JournalIndex> questioned;
  std::vector<JournalIndex> controls;
};
MatchedGroups matched_groups(std::span<const MatchRecord> matches);

void write_matches_csv(const std::vector<MatchRecord>& matches, const std::filesystem::path& path);
/// Reads matches.csv back; rows without a UJ are kept with empty uj_id.
std::vector<MatchRecord> read_matches_csv(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace citenet
