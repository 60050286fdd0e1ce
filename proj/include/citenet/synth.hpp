#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "citenet/corpus.hpp"
#include "citenet/fenwick.hpp"
#include "citenet/novelty.hpp"
#include "citenet/random.hpp"

namespace citenet {

struct SynthConfig {
  int publisher_count = 5;
  int journals_per_publisher = 5;
  int component_size_min = 450;
  int component_size_max = 550;
  double out_degree_mean = 20.0;
  double out_degree_std = 5.0;
  double in_degree_exponent = 3.0;
  int year = 2010;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Paper-level graph of a synthetic corpus. Papers are stored grouped by
/// publisher, so each publisher owns a contiguous index range.
struct SynthNetwork {
  std::vector<JournalIndex> journal_of;          // per paper
  std::vector<PublisherIndex> publisher_of;      // per journal
  std::vector<std::size_t> publisher_offsets;    // papers of publisher k: [off[k], off[k+1])
  std::vector<std::vector<JournalIndex>> journals_of_publisher;
  EdgeList edges;
  std::size_t dropped_stubs = 0;  // out-stubs that found no admissible target
  int year = 2010;

  std::size_t paper_count() const { return journal_of.size(); }
  std::size_t journal_count() const { return publisher_of.size(); }
  std::vector<std::size_t> out_degrees() const;
  std::vector<std::size_t> in_degrees() const;
  /// Dense journal citation counts, row = citing journal.
  Eigen::MatrixXd journal_counts() const;
  Eigen::VectorXd journal_sizes() const;
};

/// One component per publisher, sizes uniform in [min, max]; each paper
/// joins a uniformly chosen journal of its component. Out-degrees are
/// round(N(mean, std)) truncated at 0; in-degree capacities follow a power
/// law with the configured exponent scaled to the same total, and every
/// out-stub attaches to a target drawn in proportion to its remaining
/// capacity (no self citations, no repeated edges).
SynthNetwork generate_network(const SynthConfig& config, std::uint64_t stream = 0);
/// Journal ids are "P<k>J<j>", paper ids "P<k>-<n>", publisher ids "P<k>".
std::string synthetic_journal_id(const SynthNetwork& network, JournalIndex journal);
Corpus to_corpus(const SynthNetwork& network);
SynthNetwork from_corpus(const Corpus& corpus);
Corpus generate_synthetic(const SynthConfig& config);

/// Discrete power-law exponent MLE, 1 + n / sum(ln(k / (k_min - 1/2))) over k >= k_min.
std::optional<double> power_law_exponent_mle(std::span<const std::size_t> degrees, std::size_t k_min);

enum class LinkSelection {
  sweep,    // each pass visits every link once, in a fresh random order
  uniform,  // every step draws a link uniformly with replacement
};

struct RewireConfig {
  /// Rate of the first journal of publisher k; the others use baseline_rate.
  std::vector<double> special_rates{0.5, 0.25, 0.125, 0.0625, 0.0625};
  double baseline_rate = 0.2;
  double rewire_fraction = 3.0;
  std::vector<double> checkpoints{0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  int ensemble_count = 20;
  LinkSelection selection = LinkSelection::sweep;
  std::uint64_t seed = 1;

  void validate() const;
  /// Per-journal in-publisher probability.
  std::vector<double> journal_rates(const SynthNetwork& network) const;
};

/// Retargets links of a network in place. A step picks a link, keeps its
/// source, and with the source journal's rate draws the new target from
/// the same publisher, otherwise from a uniformly chosen other publisher;
/// within the pool targets are drawn proportional to in-degree + 1.
class Rewirer {
 public:
  Rewirer(SynthNetwork& network, std::vector<double> journal_rates, LinkSelection selection, std::uint64_t seed);
  void step(std::size_t count);
  std::size_t steps_done() const { return steps_; }
  std::size_t in_publisher_targets() const { return in_publisher_; }

 private:
  std::size_t sample_range(std::size_t lo, std::size_t hi);

  SynthNetwork& net_;
  std::vector<double> rates_;
  LinkSelection selection_;
  Rng rng_;
  Fenwick weights_;  // in-degree + 1 per paper
  std::vector<std::uint32_t> indegree_;
  std::vector<std::size_t> order_;
  std::unordered_set<std::uint64_t> present_;
  std::size_t steps_ = 0;
  std::size_t in_publisher_ = 0;
};

Corpus rewire(const Corpus& corpus, const RewireConfig& config, std::size_t step_count);

/// psi of every journal of a synthetic network (nullopt where undefined).
std::vector<std::optional<double>> synthetic_psi(const SynthNetwork& network);

struct RewireCurvePoint {
  double checkpoint = 0.0;  // multiple of the link count
  JournalIndex journal = kNoIndex;
  std::string journal_id;
  PublisherIndex publisher = kNoIndex;
  double rate = 0.0;
  double psi_ratio_mean = 0.0;
  double psi_ratio_std = 0.0;  // population std over ensembles
  std::size_t samples = 0;
};

struct RewireExperiment {
  std::vector<RewireCurvePoint> curves;  // checkpoint 0 first, then config order
  /// Mean psi over each publisher's journals before rewiring, per ensemble.
  std::vector<std::vector<double>> initial_psi;  // [publisher][ensemble]
  std::size_t dropped_stubs = 0;

  /// Mean ratio of the special journal of `publisher` at `checkpoint`.
  std::optional<double> ratio(PublisherIndex publisher, double checkpoint) const;
};

RewireExperiment psi_rewiring_experiment(const SynthConfig& synth, const RewireConfig& rewire, std::size_t threads = 1);

enum class Scenario { a, b, c };
std::string_view scenario_name(Scenario s);

/// Count table for the scenario sweeps: journals i and k share a publisher,
/// o stands for the rest of the field.
struct ScenarioCounts {
  double i_to_o = 50;   // a
  double o_to_i = 50;   // c
  double k_to_i = 10;   // b
  double k_to_o = 100;  // d
  double o_to_k = 50;   // e
  double i_to_k = 50;   // x
  double k_to_k = 20;   // f
  double papers = 100;  // per journal

  Eigen::Matrix3d matrix() const;  // order i, k, o
};

struct ScenarioPoint {
  Scenario scenario = Scenario::a;
  double x = 0.0;
  double psi = 0.0;
};

/// psi of journal i along one sweep.
///   a: i_to_k runs 10..200, every other count fixed;
///   b: i_to_k runs 10..200 with i_to_k + k_to_k held at 400, so the
///      publisher's internal total (and hence Q_r, Q_c) stays constant;
///   c: k_to_i runs 5..100 with k_to_i + k_to_k held at 400.
std::vector<ScenarioPoint> psi_scenarios(Scenario scenario);
double scenario_psi(const ScenarioCounts& counts);

/// scenario,x,psi
void write_scenarios_csv(std::span<const ScenarioPoint> points, const std::filesystem::path& path);
/// checkpoint,journal,rate,psi_ratio_mean,psi_ratio_std
void write_rewire_csv(std::span<const RewireCurvePoint> curves, const std::filesystem::path& path);

}  // namespace citenet
