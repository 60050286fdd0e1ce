#include "citenet/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "citenet/csv.hpp"
#include "citenet/fenwick.hpp"
#include "citenet/parallel.hpp"
#include "citenet/selfcite.hpp"
#include "citenet/stats.hpp"

namespace citenet {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

// Integer capacities proportional to `weights` summing exactly to `total`
// (largest remainder, ties by index), each capped at `cap`.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total, std::size_t cap) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size());
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] * static_cast<double>(total) / sum;
    out[i] = std::min(cap, static_cast<std::size_t>(std::floor(exact)));
    assigned += out[i];
    if (out[i] < cap) remainder.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainder.begin(), remainder.end(), [](auto& x, auto& y) { return x.first > y.first; });
  for (std::size_t r = 0; assigned < total && r < remainder.size(); ++r, ++assigned) ++out[remainder[r].second];
  return out;
}

}  // namespace

void SynthConfig::validate() const {
  if (publisher_count < 1 || journals_per_publisher < 1) throw Error("synthetic structure counts must be positive");
  if (component_size_min < 2 || component_size_max < component_size_min)
    throw Error("synthetic component size range is empty");
  if (out_degree_std < 0) throw Error("out-degree std must be nonnegative");
  if (!(in_degree_exponent > 2.0)) throw Error("in-degree exponent must exceed 2");
}

std::vector<std::size_t> SynthNetwork::out_degrees() const {
  std::vector<std::size_t> d(paper_count(), 0);
  for (const auto& e : edges) ++d[e.citing];
  return d;
}

std::vector<std::size_t> SynthNetwork::in_degrees() const {
  std::vector<std::size_t> d(paper_count(), 0);
  for (const auto& e : edges) ++d[e.cited];
  return d;
}

Eigen::MatrixXd SynthNetwork::journal_counts() const {
  const auto n = static_cast<Eigen::Index>(journal_count());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) c(journal_of[e.citing], journal_of[e.cited]) += 1.0;
  return c;
}

Eigen::VectorXd SynthNetwork::journal_sizes() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(journal_count()));
  for (auto j : journal_of) s(j) += 1.0;
  return s;
}

SynthNetwork generate_network(const SynthConfig& config, std::uint64_t stream) {
  config.validate();
  auto rng = make_rng(config.seed, stream);
  SynthNetwork net;
  net.year = config.year;
  const auto jpp = static_cast<std::size_t>(config.journals_per_publisher);
  net.publisher_offsets.push_back(0);
  for (int k = 0; k < config.publisher_count; ++k) {
    std::vector<JournalIndex> journals;
    for (std::size_t j = 0; j < jpp; ++j) {
      journals.push_back(static_cast<JournalIndex>(net.publisher_of.size()));
      net.publisher_of.push_back(static_cast<PublisherIndex>(k));
    }
    net.journals_of_publisher.push_back(journals);

    const auto size = static_cast<std::size_t>(
        std::uniform_int_distribution<int>(config.component_size_min, config.component_size_max)(rng));
    const std::size_t base = net.journal_of.size();
    std::uniform_int_distribution<std::size_t> pick_journal(0, jpp - 1);
    for (std::size_t p = 0; p < size; ++p) net.journal_of.push_back(journals[pick_journal(rng)]);
    net.publisher_offsets.push_back(net.journal_of.size());

    std::normal_distribution<double> out_dist(config.out_degree_mean, config.out_degree_std);
    std::vector<std::size_t> out(size);
    std::size_t total = 0;
    for (auto& d : out) {
      d = static_cast<std::size_t>(std::clamp(std::round(out_dist(rng)), 0.0, static_cast<double>(size - 1)));
      total += d;
    }
    // Continuous power law with density exponent alpha, inverse transform.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> weight(size);
    for (auto& w : weight) w = std::pow(1.0 - unit(rng), -1.0 / (config.in_degree_exponent - 1.0));
    const auto capacity = apportion(weight, total, size - 1);

    Fenwick remaining(size);
    for (std::size_t p = 0; p < size; ++p) remaining.add(p, static_cast<double>(capacity[p]));
    std::vector<std::size_t> left = capacity;
    std::unordered_set<std::uint64_t> present;
    std::vector<std::size_t> sources(size);
    std::iota(sources.begin(), sources.end(), 0);
    std::shuffle(sources.begin(), sources.end(), rng);
    for (auto s : sources) {
      for (std::size_t stub = 0; stub < out[s]; ++stub) {
        bool placed = false;
        for (int attempt = 0; attempt < 32 && !placed; ++attempt) {
          const double mass = remaining.prefix(size);
          if (!(mass > 0.0)) break;
          const auto t = remaining.find(std::uniform_real_distribution<double>(0.0, mass)(rng));
          if (t == s || left[t] == 0 || present.count(edge_key(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t))))
            continue;
          present.insert(edge_key(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t)));
          --left[t];
          remaining.add(t, -1.0);
          net.edges.push_back({static_cast<PaperIndex>(base + s), static_cast<PaperIndex>(base + t)});
          placed = true;
        }
        if (!placed) ++net.dropped_stubs;
      }
    }
  }
  std::sort(net.edges.begin(), net.edges.end(),
            [](const auto& x, const auto& y) { return std::tie(x.citing, x.cited) < std::tie(y.citing, y.cited); });
  return net;
}

std::string synthetic_journal_id(const SynthNetwork& network, JournalIndex journal) {
  const auto k = network.publisher_of[journal];
  const auto& list = network.journals_of_publisher[k];
  const auto pos = std::find(list.begin(), list.end(), journal) - list.begin();
  return fmt::format("P{}J{}", k, pos);
}

Corpus to_corpus(const SynthNetwork& network) {
  CorpusBuilder builder({network.year, network.year});
  for (std::size_t k = 0; k < network.journals_of_publisher.size(); ++k) builder.add_publisher(fmt::format("P{}", k));
  for (JournalIndex j = 0; j < network.journal_count(); ++j) {
    Journal journal;
    journal.id = synthetic_journal_id(network, j);
    journal.publisher_id = fmt::format("P{}", network.publisher_of[j]);
    journal.categories = {"10"};
    builder.add_journal(std::move(journal));
  }
  std::vector<std::vector<std::string>> refs(network.paper_count());
  auto paper_id = [&](PaperIndex p) {
    const auto k = network.publisher_of[network.journal_of[p]];
    return fmt::format("P{}-{}", k, p - network.publisher_offsets[k]);
  };
  for (const auto& e : network.edges) refs[e.citing].push_back(paper_id(e.cited));
  for (PaperIndex p = 0; p < network.paper_count(); ++p) {
    Paper paper;
    paper.id = paper_id(p);
    paper.journal_id = synthetic_journal_id(network, network.journal_of[p]);
    paper.year = network.year;
    paper.references = std::move(refs[p]);
    builder.add_paper(std::move(paper));
  }
  return std::move(builder).build();
}

namespace {

// `order` maps network positions back to corpus papers.
SynthNetwork network_of(const Corpus& corpus, std::vector<PaperIndex>& order) {
  SynthNetwork net;
  const auto lists = publisher_journal_lists(corpus);
  order.clear();
  std::vector<PaperIndex> position(corpus.papers().size(), kNoIndex);
  net.publisher_offsets.push_back(0);
  for (PublisherIndex k = 0; k < lists.size(); ++k) {
    net.journals_of_publisher.push_back(lists[k]);
    for (auto j : lists[k]) {
      if (net.publisher_of.size() <= j) net.publisher_of.resize(j + 1, kNoIndex);
      net.publisher_of[j] = k;
      for (auto p : corpus.journal_papers(j)) {
        position[p] = static_cast<PaperIndex>(order.size());
        order.push_back(p);
        net.journal_of.push_back(j);
      }
    }
    net.publisher_offsets.push_back(order.size());
  }
  net.publisher_of.resize(corpus.journals().size(), kNoIndex);
  if (std::find(net.publisher_of.begin(), net.publisher_of.end(), kNoIndex) != net.publisher_of.end())
    throw Error("rewiring needs every journal to belong to a publisher");
  for (auto p : order) {
    net.year = corpus.paper(p).year;
    for (auto r : corpus.references(p))
      if (position[r] != kNoIndex) net.edges.push_back({position[p], position[r]});
  }
  return net;
}

}  // namespace

SynthNetwork from_corpus(const Corpus& corpus) {
  std::vector<PaperIndex> order;
  return network_of(corpus, order);
}

Corpus generate_synthetic(const SynthConfig& config) { return to_corpus(generate_network(config)); }

std::optional<double> power_law_exponent_mle(std::span<const std::size_t> degrees, std::size_t k_min) {
  double log_sum = 0.0;
  std::size_t n = 0;
  for (auto k : degrees)
    if (k >= k_min && k > 0) {
      log_sum += std::log(static_cast<double>(k) / (static_cast<double>(k_min) - 0.5));
      ++n;
    }
  if (n == 0 || !(log_sum > 0.0)) return std::nullopt;
  return 1.0 + static_cast<double>(n) / log_sum;
}

void RewireConfig::validate() const {
  for (double r : special_rates)
    if (r < 0.0 || r > 1.0) throw Error("rewiring rates must lie in [0, 1]");
  if (baseline_rate < 0.0 || baseline_rate > 1.0) throw Error("rewiring rates must lie in [0, 1]");
  if (rewire_fraction < 0.0) throw Error("rewire_fraction must be nonnegative");
  if (ensemble_count < 1) throw Error("ensemble_count must be at least 1");
}

std::vector<double> RewireConfig::journal_rates(const SynthNetwork& network) const {
  std::vector<double> rates(network.journal_count(), baseline_rate);
  for (std::size_t k = 0; k < network.journals_of_publisher.size() && k < special_rates.size(); ++k)
    if (!network.journals_of_publisher[k].empty()) rates[network.journals_of_publisher[k].front()] = special_rates[k];
  return rates;
}

Rewirer::Rewirer(SynthNetwork& network, std::vector<double> journal_rates, LinkSelection selection, std::uint64_t seed)
    : net_(network), rates_(std::move(journal_rates)), selection_(selection), rng_(seed), weights_(network.paper_count()) {
  const auto n = net_.paper_count();
  indegree_.assign(n, 0);
  for (const auto& e : net_.edges) {
    ++indegree_[e.cited];
    present_.insert(edge_key(e.citing, e.cited));
  }
  for (std::size_t p = 0; p < n; ++p) weights_.add(p, indegree_[p] + 1.0);
  order_.resize(net_.edges.size());
  std::iota(order_.begin(), order_.end(), 0);
}

std::size_t Rewirer::sample_range(std::size_t lo, std::size_t hi) {
  const double base = weights_.prefix(lo);
  const double mass = weights_.prefix(hi) - base;
  return std::clamp(weights_.find(base + std::uniform_real_distribution<double>(0.0, mass)(rng_)), lo, hi - 1);
}

void Rewirer::step(std::size_t count) {
  const std::size_t links = net_.edges.size();
  if (links == 0) return;
  const std::size_t publishers = net_.journals_of_publisher.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < count; ++s, ++steps_) {
    std::size_t link;
    if (selection_ == LinkSelection::sweep) {
      if (steps_ % links == 0) std::shuffle(order_.begin(), order_.end(), rng_);
      link = order_[steps_ % links];
    } else {
      link = std::uniform_int_distribution<std::size_t>(0, links - 1)(rng_);
    }
    auto& e = net_.edges[link];
    const auto source_journal = net_.journal_of[e.citing];
    const auto own = net_.publisher_of[source_journal];
    present_.erase(edge_key(e.citing, e.cited));
    --indegree_[e.cited];
    weights_.add(e.cited, -1.0);

    const bool inside = publishers < 2 || unit(rng_) < rates_[source_journal];
    PublisherIndex pool = own;
    if (!inside) {
      pool = static_cast<PublisherIndex>(std::uniform_int_distribution<std::size_t>(0, publishers - 2)(rng_));
      if (pool >= own) ++pool;
    }
    const auto lo = net_.publisher_offsets[pool], hi = net_.publisher_offsets[pool + 1];
    PaperIndex target = e.cited;
    for (int attempt = 0; attempt < 64 && hi > lo; ++attempt) {
      const auto t = static_cast<PaperIndex>(sample_range(lo, hi));
      if (t != e.citing && !present_.count(edge_key(e.citing, t))) {
        target = t;
        break;
      }
    }
    e.cited = target;
    if (net_.publisher_of[net_.journal_of[target]] == own) ++in_publisher_;
    present_.insert(edge_key(e.citing, e.cited));
    ++indegree_[e.cited];
    weights_.add(e.cited, 1.0);
  }
}

Corpus rewire(const Corpus& corpus, const RewireConfig& config, std::size_t step_count) {
  config.validate();
  std::vector<PaperIndex> order;
  auto net = network_of(corpus, order);
  Rewirer rewirer(net, config.journal_rates(net), config.selection, derive_seed(config.seed, 0));
  rewirer.step(step_count);

  std::vector<std::vector<std::string>> refs(corpus.papers().size());
  for (const auto& e : net.edges) refs[order[e.citing]].push_back(corpus.paper(order[e.cited]).id);
  CorpusBuilder builder(corpus.year_range());
  for (const auto& p : corpus.publishers())
    if (p.declared) builder.add_publisher(p.id);
  for (const auto& j : corpus.journals()) builder.add_journal(j);
  for (const auto& [key, name] : corpus.author_names()) builder.add_author_name(key, name);
  for (PaperIndex p = 0; p < corpus.papers().size(); ++p) {
    Paper paper = corpus.paper(p);
    paper.references = std::move(refs[p]);
    builder.add_paper(std::move(paper));
  }
  return std::move(builder).build();
}

std::vector<std::optional<double>> synthetic_psi(const SynthNetwork& network) {
  const Eigen::MatrixXd counts = network.journal_counts();
  const Eigen::VectorXd sizes = network.journal_sizes();
  const auto totals = count_totals(counts);
  std::vector<std::optional<double>> psi(network.journal_count());
  for (const auto& journals : network.journals_of_publisher)
    for (const auto& s : publisher_solidarity(counts, totals, sizes, journals)) psi[s.journal] = s.psi;
  return psi;
}

std::optional<double> RewireExperiment::ratio(PublisherIndex publisher, double checkpoint) const {
  for (const auto& c : curves)
    if (c.publisher == publisher && std::abs(c.checkpoint - checkpoint) < 1e-12) return c.psi_ratio_mean;
  return std::nullopt;
}

RewireExperiment psi_rewiring_experiment(const SynthConfig& synth, const RewireConfig& rewire, std::size_t threads) {
  synth.validate();
  rewire.validate();
  std::vector<double> checkpoints{0.0};
  for (double c : rewire.checkpoints)
    if (c > 0.0 && c <= rewire.rewire_fraction + 1e-12) checkpoints.push_back(c);
  std::sort(checkpoints.begin(), checkpoints.end());

  const auto ensembles = static_cast<std::size_t>(rewire.ensemble_count);
  const auto publishers = static_cast<std::size_t>(synth.publisher_count);
  // ratios[e][checkpoint][publisher], initial[e][publisher]
  std::vector<std::vector<std::vector<std::optional<double>>>> ratios(ensembles);
  std::vector<std::vector<double>> initial(ensembles, std::vector<double>(publishers, 0.0));
  std::vector<std::size_t> dropped(ensembles, 0);
  std::vector<std::string> journal_ids(publishers);
  std::vector<JournalIndex> special(publishers);

  parallel_for(ensembles, threads, [&](std::size_t e) {
    SynthConfig cfg = synth;
    cfg.seed = derive_seed(synth.seed, e);
    auto net = generate_network(cfg);
    dropped[e] = net.dropped_stubs;
    const auto psi0 = synthetic_psi(net);
    for (std::size_t k = 0; k < publishers; ++k) {
      std::vector<double> values;
      for (auto j : net.journals_of_publisher[k])
        if (psi0[j]) values.push_back(*psi0[j]);
      initial[e][k] = stats::mean(values).value_or(0.0);
    }
    if (e == 0)
      for (std::size_t k = 0; k < publishers; ++k) {
        special[k] = net.journals_of_publisher[k].front();
        journal_ids[k] = synthetic_journal_id(net, special[k]);
      }
    Rewirer rewirer(net, rewire.journal_rates(net), rewire.selection, derive_seed(rewire.seed, e));
    const auto links = static_cast<double>(net.edges.size());
    for (double c : checkpoints) {
      const auto target = static_cast<std::size_t>(std::llround(c * links));
      rewirer.step(target - rewirer.steps_done());
      const auto psi = synthetic_psi(net);
      std::vector<std::optional<double>> row(publishers);
      for (std::size_t k = 0; k < publishers; ++k) {
        const auto j = net.journals_of_publisher[k].front();
        if (psi[j] && psi0[j] && *psi0[j] != 0.0) row[k] = *psi[j] / *psi0[j];
      }
      ratios[e].push_back(std::move(row));
    }
  });

  RewireExperiment result;
  for (std::size_t k = 0; k < publishers; ++k) {
    std::vector<double> column(ensembles);
    for (std::size_t e = 0; e < ensembles; ++e) column[e] = initial[e][k];
    result.initial_psi.push_back(std::move(column));
  }
  result.dropped_stubs = std::accumulate(dropped.begin(), dropped.end(), std::size_t{0});
  for (std::size_t c = 0; c < checkpoints.size(); ++c)
    for (std::size_t k = 0; k < publishers; ++k) {
      std::vector<double> values;
      for (std::size_t e = 0; e < ensembles; ++e)
        if (ratios[e][c][k]) values.push_back(*ratios[e][c][k]);
      RewireCurvePoint point;
      point.checkpoint = checkpoints[c];
      point.journal = special[k];
      point.journal_id = journal_ids[k];
      point.publisher = static_cast<PublisherIndex>(k);
      point.rate = k < rewire.special_rates.size() ? rewire.special_rates[k] : rewire.baseline_rate;
      point.psi_ratio_mean = stats::mean(values).value_or(std::nan(""));
      point.psi_ratio_std = stats::stddev(values).value_or(std::nan(""));
      point.samples = values.size();
      result.curves.push_back(point);
    }
  return result;
}

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::a: return "a";
    case Scenario::b: return "b";
    case Scenario::c: return "c";
  }
  return "?";
}

Eigen::Matrix3d ScenarioCounts::matrix() const {
  Eigen::Matrix3d m;
  // rows citing, columns cited; order i, k, o
  m << 0.0, i_to_k, i_to_o,
       k_to_i, k_to_k, k_to_o,
       o_to_i, o_to_k, 0.0;
  return m;
}

double scenario_psi(const ScenarioCounts& counts) {
  const Eigen::Matrix3d m = counts.matrix();
  const Eigen::Vector3d sizes = Eigen::Vector3d::Constant(counts.papers);
  const JournalIndex publisher[] = {0, 1};
  const auto score = solidarity_index(m, sizes, publisher, 0);
  if (!score.psi) throw Error("scenario counts leave psi undefined");
  return *score.psi;
}

std::vector<ScenarioPoint> psi_scenarios(Scenario scenario) {
  constexpr double kInternal = 400.0;
  std::vector<ScenarioPoint> points;
  if (scenario == Scenario::c) {
    for (int b = 5; b <= 100; b += 5) {
      ScenarioCounts c;
      c.k_to_i = b;
      c.k_to_k = kInternal - b;
      points.push_back({scenario, static_cast<double>(b), scenario_psi(c)});
    }
    return points;
  }
  for (int x = 10; x <= 200; x += 10) {
    ScenarioCounts c;
    c.i_to_k = x;
    if (scenario == Scenario::b) c.k_to_k = kInternal - x;
    points.push_back({scenario, static_cast<double>(x), scenario_psi(c)});
  }
  return points;
}

void write_scenarios_csv(std::span<const ScenarioPoint> points, const std::filesystem::path& path) {
  csv::Writer w({"scenario", "x", "psi"});
  for (const auto& p : points) {
    w.cell(scenario_name(p.scenario)).cell(p.x).cell(p.psi);
    w.end_row();
  }
  w.save(path);
}

void write_rewire_csv(std::span<const RewireCurvePoint> curves, const std::filesystem::path& path) {
  csv::Writer w({"checkpoint", "journal", "rate", "psi_ratio_mean", "psi_ratio_std"});
  for (const auto& c : curves) {
    w.cell(c.checkpoint).cell(c.journal_id).cell(c.rate).cell(c.psi_ratio_mean).cell(c.psi_ratio_std);
    w.end_row();
  }
  w.save(path);
}

}  // namespace citenet
