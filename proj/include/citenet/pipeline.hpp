#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "citenet/authors.hpp"
#include "citenet/centrality.hpp"
#include "citenet/corpus.hpp"
#include "citenet/matching.hpp"
#include "citenet/network.hpp"
#include "citenet/novelty.hpp"
#include "citenet/synth.hpp"

namespace citenet {

inline constexpr const char* kStageNames[] = {"impact", "matching", "selfcite", "jnet",
                                              "novelty", "disruption", "authors", "synth"};

/// Everything a run needs, parsed from one JSON file. Relative paths are
/// resolved against the directory of that file.
struct RunConfig {
  CorpusPaths corpus;
  std::string format{kJsonlCsvFormat};
  YearWindow years{1996, 2018};
  std::filesystem::path output = "out";
  std::size_t threads = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> stages;  // enabled stages, any order

  struct Impact {
    std::vector<int> years;  // empty: every year with papers
    bool normalize = true;
    int reference_year = 2017;
    std::filesystem::path normalization_table;  // optional CSV instead of deriving one
    bool market_share = false;
  } impact;

  struct Matching {
    int year = 2016;
    ImpactBasis basis = ImpactBasis::normalized;
    BinScheme scheme = BinScheme::terciles;
  } matching;

  struct Selfcite {
    YearWindow window = YearWindow::all();
    bool include_self = true;
    bool self_rates = true;
    std::filesystem::path rate_queries;  // optional
  } selfcite;

  struct Jnet {
    std::vector<int> years{2016};
    std::vector<int> windows{2};
    std::vector<LinkType> link_types{LinkType::citation};
    std::vector<Metric> metrics{Metric::betweenness, Metric::closeness, Metric::pagerank, Metric::pathcore};
    bool export_edges = true;
  } jnet;

  ShuffleConfig novelty;  // seed is derived from `seed`
  YearWindow disruption_citer_years = YearWindow::all();
  SimilarityWeights authors;
  SynthConfig synth;    // seed is derived from `seed`
  RewireConfig rewire;  // seed is derived from `seed`

  bool enabled(std::string_view stage) const;

  static RunConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);
  /// Canonical form with every field present; the config hash is taken over
  /// its compact dump.
  nlohmann::json to_json() const;
  std::uint64_t hash() const;

  /// Problems that prevent a run: missing files, unknown stages, bad values.
  std::vector<std::string> problems() const;
};

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view data);

enum class StageStatus { ok, failed, skipped, disabled };
std::string_view stage_status_name(StageStatus s);

struct StageResult {
  std::string name;
  StageStatus status = StageStatus::disabled;
  double seconds = 0.0;
  std::vector<std::string> outputs;  // file names relative to the output dir
  std::vector<std::string> warnings;
  std::string error;
};

struct RunReport {
  std::uint64_t config_hash = 0;
  std::vector<StageResult> stages;
  bool partial() const;
  const StageResult* stage(std::string_view name) const;
};

/// Runs the enabled stages in dependency order. A failing stage marks its
/// dependents skipped; other stages still run. Writes manifest.json and, on
/// a partial run, a PARTIAL marker file.
RunReport run_pipeline(const RunConfig& config);

/// Matching diagnostics for every binning scheme; writes binning_diagnostic.csv.
void write_binning_diagnostic(const RunConfig& config);

}  // namespace citenet
