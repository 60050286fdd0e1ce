#include "citenet/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "citenet/csv.hpp"
#include "citenet/disruption.hpp"
#include "citenet/impact.hpp"
#include "citenet/random.hpp"
#include "citenet/selfcite.hpp"

namespace citenet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed streams for the randomized stages.
constexpr std::uint64_t kNoveltyStream = 101;
constexpr std::uint64_t kSynthStream = 102;
constexpr std::uint64_t kRewireStream = 103;

const std::map<std::string, std::set<std::string>> kSectionKeys = {
    {"corpus", {"papers", "journals", "publishers", "authors", "format", "first_year", "last_year"}},
    {"impact", {"years", "normalize", "reference_year", "normalization_table", "market_share"}},
    {"matching", {"year", "basis", "scheme"}},
    {"selfcite", {"first_year", "last_year", "include_self", "self_rates", "rate_queries"}},
    {"jnet", {"years", "windows", "link_types", "metrics", "export_edges"}},
    {"novelty", {"ensemble_count", "swaps_per_edge", "collapse_pairs"}},
    {"disruption", {"first_year", "last_year"}},
    {"authors",
     {"w_self_citation", "w_shared_author", "w_shared_citation", "w_shared_reference", "pair_threshold",
      "group_threshold"}},
    {"synth",
     {"publisher_count", "journals_per_publisher", "component_size_min", "component_size_max", "out_degree_mean",
      "out_degree_std", "in_degree_exponent", "year"}},
    {"rewire", {"special_rates", "baseline_rate", "rewire_fraction", "checkpoints", "ensemble_count", "selection"}},
};
const std::set<std::string> kTopKeys = {"corpus", "output", "threads", "seed", "stages", "impact", "matching",
                                        "selfcite", "jnet", "novelty", "disruption", "authors", "synth", "rewire"};

// Reads `key` from `obj` into `out` when present, naming the field on a type error.
template <class T>
void read(const json& obj, const char* section, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw Error(fmt::format("config field '{}.{}': unexpected type", section, key));
  }
}

void read_path(const json& obj, const char* section, const char* key, const fs::path& base, fs::path& out) {
  std::string value;
  read(obj, section, key, value);
  if (value.empty()) return;
  fs::path p(value);
  out = p.is_absolute() || base.empty() ? p : base / p;
}

void read_window(const json& obj, const char* section, YearWindow& window) {
  read(obj, section, "first_year", window.first);
  read(obj, section, "last_year", window.last);
}

json window_json(YearWindow w) {
  json j = json::object();
  j["first_year"] = w.first == std::numeric_limits<int>::min() ? json(nullptr) : json(w.first);
  j["last_year"] = w.last == std::numeric_limits<int>::max() ? json(nullptr) : json(w.last);
  return j;
}

const json& section(const json& doc, const char* name) {
  static const json empty = json::object();
  auto it = doc.find(name);
  if (it == doc.end() || it->is_null()) return empty;
  if (!it->is_object()) throw Error(fmt::format("config section '{}' must be an object", name));
  return *it;
}

BinScheme parse_scheme(const std::string& name) {
  for (auto s : {BinScheme::terciles, BinScheme::quartiles, BinScheme::log_sigma})
    if (scheme_name(s) == name) return s;
  throw Error(fmt::format("config field 'matching.scheme': unknown scheme '{}'", name));
}

LinkType parse_link_type(const std::string& name) {
  if (name == "citation") return LinkType::citation;
  if (name == "reference") return LinkType::reference;
  throw Error(fmt::format("config field 'jnet.link_types': unknown link type '{}'", name));
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool RunConfig::enabled(std::string_view stage) const {
  return std::find(stages.begin(), stages.end(), stage) != stages.end();
}

RunConfig RunConfig::from_json(const json& doc, const fs::path& base) {
  if (!doc.is_object()) throw Error("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, _] : doc.items())
    if (!kTopKeys.count(key)) throw Error(fmt::format("config: unknown key '{}'", key));
  for (const auto& [name, keys] : kSectionKeys)
    for (const auto& [key, _] : section(doc, name.c_str()).items())
      if (!keys.count(key)) throw Error(fmt::format("config: unknown key '{}.{}'", name, key));

  const auto& corpus = section(doc, "corpus");
  read_path(corpus, "corpus", "papers", base, c.corpus.papers);
  read_path(corpus, "corpus", "journals", base, c.corpus.journals);
  read_path(corpus, "corpus", "publishers", base, c.corpus.publishers);
  read_path(corpus, "corpus", "authors", base, c.corpus.authors);
  read(corpus, "corpus", "format", c.format);
  read_window(corpus, "corpus", c.years);

  read_path(doc, "", "output", base, c.output);
  read(doc, "", "threads", c.threads);
  read(doc, "", "seed", c.seed);
  read(doc, "", "stages", c.stages);

  const auto& impact = section(doc, "impact");
  read(impact, "impact", "years", c.impact.years);
  read(impact, "impact", "normalize", c.impact.normalize);
  read(impact, "impact", "reference_year", c.impact.reference_year);
  read_path(impact, "impact", "normalization_table", base, c.impact.normalization_table);
  read(impact, "impact", "market_share", c.impact.market_share);

  const auto& matching = section(doc, "matching");
  read(matching, "matching", "year", c.matching.year);
  std::string basis = "normalized", scheme{scheme_name(c.matching.scheme)};
  read(matching, "matching", "basis", basis);
  read(matching, "matching", "scheme", scheme);
  if (basis != "normalized" && basis != "raw")
    throw Error(fmt::format("config field 'matching.basis': expected 'normalized' or 'raw', got '{}'", basis));
  c.matching.basis = basis == "raw" ? ImpactBasis::raw : ImpactBasis::normalized;
  c.matching.scheme = parse_scheme(scheme);

  const auto& selfcite = section(doc, "selfcite");
  read_window(selfcite, "selfcite", c.selfcite.window);
  read(selfcite, "selfcite", "include_self", c.selfcite.include_self);
  read(selfcite, "selfcite", "self_rates", c.selfcite.self_rates);
  read_path(selfcite, "selfcite", "rate_queries", base, c.selfcite.rate_queries);

  const auto& jnet = section(doc, "jnet");
  read(jnet, "jnet", "years", c.jnet.years);
  read(jnet, "jnet", "windows", c.jnet.windows);
  read(jnet, "jnet", "export_edges", c.jnet.export_edges);
  if (jnet.contains("link_types")) {
    std::vector<std::string> names;
    read(jnet, "jnet", "link_types", names);
    c.jnet.link_types.clear();
    for (const auto& n : names) c.jnet.link_types.push_back(parse_link_type(n));
  }
  if (jnet.contains("metrics")) {
    std::vector<std::string> names;
    read(jnet, "jnet", "metrics", names);
    c.jnet.metrics.clear();
    for (const auto& n : names) c.jnet.metrics.push_back(parse_metric(n));
  }

  const auto& novelty = section(doc, "novelty");
  read(novelty, "novelty", "ensemble_count", c.novelty.ensemble_count);
  read(novelty, "novelty", "swaps_per_edge", c.novelty.swaps_per_edge);
  read(novelty, "novelty", "collapse_pairs", c.novelty.collapse_pairs);

  read_window(section(doc, "disruption"), "disruption", c.disruption_citer_years);

  const auto& authors = section(doc, "authors");
  read(authors, "authors", "w_self_citation", c.authors.w_self_citation);
  read(authors, "authors", "w_shared_author", c.authors.w_shared_author);
  read(authors, "authors", "w_shared_citation", c.authors.w_shared_citation);
  read(authors, "authors", "w_shared_reference", c.authors.w_shared_reference);
  read(authors, "authors", "pair_threshold", c.authors.pair_threshold);
  read(authors, "authors", "group_threshold", c.authors.group_threshold);

  const auto& synth = section(doc, "synth");
  read(synth, "synth", "publisher_count", c.synth.publisher_count);
  read(synth, "synth", "journals_per_publisher", c.synth.journals_per_publisher);
  read(synth, "synth", "component_size_min", c.synth.component_size_min);
  read(synth, "synth", "component_size_max", c.synth.component_size_max);
  read(synth, "synth", "out_degree_mean", c.synth.out_degree_mean);
  read(synth, "synth", "out_degree_std", c.synth.out_degree_std);
  read(synth, "synth", "in_degree_exponent", c.synth.in_degree_exponent);
  read(synth, "synth", "year", c.synth.year);

  const auto& rewire = section(doc, "rewire");
  read(rewire, "rewire", "special_rates", c.rewire.special_rates);
  read(rewire, "rewire", "baseline_rate", c.rewire.baseline_rate);
  read(rewire, "rewire", "rewire_fraction", c.rewire.rewire_fraction);
  read(rewire, "rewire", "checkpoints", c.rewire.checkpoints);
  read(rewire, "rewire", "ensemble_count", c.rewire.ensemble_count);
  std::string selection = "sweep";
  read(rewire, "rewire", "selection", selection);
  if (selection != "sweep" && selection != "uniform")
    throw Error(fmt::format("config field 'rewire.selection': expected 'sweep' or 'uniform', got '{}'", selection));
  c.rewire.selection = selection == "uniform" ? LinkSelection::uniform : LinkSelection::sweep;
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open config {}", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return from_json(doc, path.parent_path());
}

json RunConfig::to_json() const {
  json j;
  json corpus_json = window_json(years);
  corpus_json["papers"] = corpus.papers.string();
  corpus_json["journals"] = corpus.journals.string();
  corpus_json["publishers"] = corpus.publishers.string();
  corpus_json["authors"] = corpus.authors.string();
  corpus_json["format"] = format;
  j["corpus"] = corpus_json;
  j["output"] = output.string();
  j["threads"] = threads;
  j["seed"] = seed;
  j["stages"] = stages;
  j["impact"] = {{"years", impact.years},
                 {"normalize", impact.normalize},
                 {"reference_year", impact.reference_year},
                 {"normalization_table", impact.normalization_table.string()},
                 {"market_share", impact.market_share}};
  j["matching"] = {{"year", matching.year},
                   {"basis", matching.basis == ImpactBasis::raw ? "raw" : "normalized"},
                   {"scheme", scheme_name(matching.scheme)}};
  json sc = window_json(selfcite.window);
  sc["include_self"] = selfcite.include_self;
  sc["self_rates"] = selfcite.self_rates;
  sc["rate_queries"] = selfcite.rate_queries.string();
  j["selfcite"] = sc;
  std::vector<std::string> link_names, metric_names;
  for (auto t : jnet.link_types) link_names.emplace_back(link_type_name(t));
  for (auto m : jnet.metrics) metric_names.emplace_back(metric_name(m));
  j["jnet"] = {{"years", jnet.years},
               {"windows", jnet.windows},
               {"link_types", link_names},
               {"metrics", metric_names},
               {"export_edges", jnet.export_edges}};
  j["novelty"] = {{"ensemble_count", novelty.ensemble_count},
                  {"swaps_per_edge", novelty.swaps_per_edge},
                  {"collapse_pairs", novelty.collapse_pairs}};
  j["disruption"] = window_json(disruption_citer_years);
  j["authors"] = {{"w_self_citation", authors.w_self_citation},
                  {"w_shared_author", authors.w_shared_author},
                  {"w_shared_citation", authors.w_shared_citation},
                  {"w_shared_reference", authors.w_shared_reference},
                  {"pair_threshold", authors.pair_threshold},
                  {"group_threshold", authors.group_threshold}};
  j["synth"] = {{"publisher_count", synth.publisher_count},
                {"journals_per_publisher", synth.journals_per_publisher},
                {"component_size_min", synth.component_size_min},
                {"component_size_max", synth.component_size_max},
                {"out_degree_mean", synth.out_degree_mean},
                {"out_degree_std", synth.out_degree_std},
                {"in_degree_exponent", synth.in_degree_exponent},
                {"year", synth.year}};
  j["rewire"] = {{"special_rates", rewire.special_rates},
                 {"baseline_rate", rewire.baseline_rate},
                 {"rewire_fraction", rewire.rewire_fraction},
                 {"checkpoints", rewire.checkpoints},
                 {"ensemble_count", rewire.ensemble_count},
                 {"selection", rewire.selection == LinkSelection::uniform ? "uniform" : "sweep"}};
  return j;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(to_json().dump()); }

std::vector<std::string> RunConfig::problems() const {
  std::vector<std::string> out;
  for (const auto& s : stages)
    if (std::find(std::begin(kStageNames), std::end(kStageNames), s) == std::end(kStageNames))
      out.push_back(fmt::format("unknown stage '{}'", s));
  const bool needs_corpus = std::any_of(stages.begin(), stages.end(), [](const auto& s) { return s != "synth"; });
  auto require = [&](const fs::path& p, const char* what, bool mandatory) {
    if (p.empty()) {
      if (mandatory) out.push_back(fmt::format("{} path is not set", what));
      return;
    }
    if (!fs::exists(p)) out.push_back(fmt::format("{} not found: {}", what, p.string()));
  };
  if (needs_corpus) {
    require(corpus.papers, "corpus.papers", true);
    require(corpus.journals, "corpus.journals", true);
    require(corpus.publishers, "corpus.publishers", false);
    require(corpus.authors, "corpus.authors", false);
    if (format != kJsonlCsvFormat) out.push_back(fmt::format("unsupported corpus format '{}'", format));
  }
  require(impact.normalization_table, "impact.normalization_table", false);
  require(selfcite.rate_queries, "selfcite.rate_queries", false);
  if (years.first > years.last) out.push_back("corpus year range is empty");
  if (output.empty()) out.push_back("output directory is not set");
  for (int w : jnet.windows)
    if (w < 1) out.push_back(fmt::format("jnet window {} must be at least 1", w));
  auto check = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      out.push_back(e.what());
    }
  };
  check([&] { novelty.validate(); });
  check([&] { authors.validate(); });
  check([&] { synth.validate(); });
  check([&] { rewire.validate(); });
  return out;
}

std::string_view stage_status_name(StageStatus s) {
  switch (s) {
    case StageStatus::ok: return "ok";
    case StageStatus::failed: return "failed";
    case StageStatus::skipped: return "skipped";
    case StageStatus::disabled: return "disabled";
  }
  return "?";
}

bool RunReport::partial() const {
  return std::any_of(stages.begin(), stages.end(), [](const StageResult& s) {
    return s.status == StageStatus::failed || s.status == StageStatus::skipped;
  });
}

const StageResult* RunReport::stage(std::string_view name) const {
  for (const auto& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

struct Context {
  const RunConfig& config;
  std::optional<Corpus> corpus;
  StageResult* current = nullptr;

  fs::path out(const std::string& name) {
    current->outputs.push_back(name);
    return config.output / name;
  }
  fs::path input(const std::string& name, const char* stage) const {
    auto p = config.output / name;
    if (!fs::exists(p)) throw Error(fmt::format("missing input {} (produced by stage '{}')", name, stage));
    return p;
  }
  void warn(std::string message) { current->warnings.push_back(std::move(message)); }
  // matches.csv when available; soft dependency for grouped outputs.
  std::optional<std::vector<MatchRecord>> matches() {
    auto p = config.output / "matches.csv";
    if (!fs::exists(p)) {
      warn("matches.csv not found; QJ/UJ grouped outputs skipped");
      return std::nullopt;
    }
    return read_matches_csv(*corpus, p);
  }
};

void stage_corpus(Context& ctx) {
  ctx.corpus = load_corpus(ctx.config.corpus, ctx.config.format, ctx.config.years);
  const auto& report = ctx.corpus->load_report();
  if (!report.dangling.empty()) ctx.warn(fmt::format("{} dangling references", report.dangling.size()));
  if (!report.unknown_journal_papers.empty())
    ctx.warn(fmt::format("{} papers with unknown journal", report.unknown_journal_papers.size()));
}

YearWindow paper_years(const Corpus& corpus, YearWindow within) {
  YearWindow w{std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
  for (const auto& p : corpus.papers())
    if (within.contains(p.year)) {
      w.first = std::min(w.first, p.year);
      w.last = std::max(w.last, p.year);
    }
  return w;
}

void stage_impact(Context& ctx) {
  const auto& cfg = ctx.config.impact;
  const auto& corpus = *ctx.corpus;
  std::optional<NormalizationTable> table;
  if (!cfg.normalization_table.empty()) {
    table = NormalizationTable::load(cfg.normalization_table);
  } else if (cfg.normalize) {
    try {
      table = NormalizationTable::from_corpus(corpus, cfg.reference_year);
    } catch (const Error& e) {
      ctx.warn(fmt::format("normalization disabled: {}", e.what()));
    }
  }
  const NormalizationTable* t = table ? &*table : nullptr;
  std::vector<ImpactRecord> records;
  if (cfg.years.empty()) {
    records = impact_table(corpus, paper_years(corpus, ctx.config.years), t, ctx.config.threads);
  } else {
    for (int y : cfg.years) {
      auto part = impact_table(corpus, YearWindow::single(y), t, ctx.config.threads);
      records.insert(records.end(), part.begin(), part.end());
    }
    std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
      return std::tie(a.journal, a.year) < std::tie(b.journal, b.year);
    });
  }
  write_impact_csv(corpus, records, ctx.out("impact.csv"));
  if (cfg.market_share) write_market_share_csv(corpus, paper_years(corpus, ctx.config.years), ctx.out("market_share.csv"));
}

void stage_matching(Context& ctx) {
  const auto lookup = read_impact_csv(ctx.input("impact.csv", "impact"));
  const auto& cfg = ctx.config.matching;
  MatchingRegistry registry(journal_profiles(*ctx.corpus, cfg.year, lookup, cfg.basis), cfg.scheme);
  const auto matches = registry.match_all();
  const auto unmatched = std::count_if(matches.begin(), matches.end(), [](const auto& m) { return !m.uj; });
  if (unmatched) ctx.warn(fmt::format("{} questionable journal/category records without a control", unmatched));
  write_matches_csv(matches, ctx.out("matches.csv"));
}

void stage_selfcite(Context& ctx) {
  const auto& corpus = *ctx.corpus;
  const auto& cfg = ctx.config.selfcite;
  write_solidarity_csv(corpus, solidarity_scores(corpus, {cfg.window, cfg.include_self}), ctx.out("solidarity.csv"));
  if (cfg.self_rates) {
    if (auto matches = ctx.matches()) {
      const auto groups = matched_groups(*matches);
      const auto rows = self_rate_summary(corpus, {{"QJ", groups.questioned}, {"UJ", groups.controls}}, cfg.window);
      write_self_rates_csv(rows, ctx.out("self_rates.csv"));
    }
  }
  if (!cfg.rate_queries.empty())
    write_rates_csv(corpus, read_rate_queries(cfg.rate_queries), ctx.out("rates.csv"));
}

void stage_jnet(Context& ctx) {
  const auto& corpus = *ctx.corpus;
  const auto& cfg = ctx.config.jnet;
  const auto matches = ctx.matches();
  std::vector<ComparisonReport> reports;
  for (int year : cfg.years)
    for (int window : cfg.windows)
      for (auto type : cfg.link_types) {
        JournalCitationNetwork net;
        try {
          net = build_journal_network(corpus, year, window, type);
        } catch (const Error& e) {
          ctx.warn(fmt::format("network {} {}{} skipped: {}", year, window, link_type_name(type), e.what()));
          continue;
        }
        for (auto& w : net.warnings) ctx.warn(w);
        if (net.empty()) continue;
        if (cfg.export_edges)
          write_edge_list_csv(corpus, net,
                              ctx.out(fmt::format("network_{}_{}{}.csv", year, window, link_type_name(type))));
        std::vector<CentralityVector> vectors;
        for (auto metric : cfg.metrics) {
          vectors.push_back(compute_centrality(net, metric, ctx.config.threads));
          write_centrality_csv(corpus, vectors.back(), ctx.out(centrality_file_name(metric, year, window, type)));
        }
        if (matches) reports.push_back(centrality_comparison(corpus, *matches, vectors));
      }
  if (matches) {
    write_comparison_csv(reports, ctx.out("centrality_comparison.csv"));
    write_log_difference_csv(reports, ctx.out("centrality_log_difference.csv"));
  }
}

void stage_novelty(Context& ctx) {
  ShuffleConfig cfg = ctx.config.novelty;
  cfg.seed = derive_seed(ctx.config.seed, kNoveltyStream);
  std::vector<std::string> log;
  const auto z = pair_zscores(*ctx.corpus, cfg, ctx.config.threads, &log);
  for (auto& l : log) ctx.warn(std::move(l));
  if (z.undefined_count) ctx.warn(fmt::format("{} journal pairs with zero null variance", z.undefined_count));
  const auto rows = novelty_table(*ctx.corpus, z, cfg.collapse_pairs);
  write_novelty_csv(*ctx.corpus, rows, ctx.out("novelty.csv"));
}

void stage_disruption(Context& ctx) {
  const auto rows = disruption_table(*ctx.corpus, ctx.config.disruption_citer_years, ctx.config.threads);
  write_disruption_csv(*ctx.corpus, rows, ctx.out("disruption.csv"));
}

void stage_authors(Context& ctx) {
  const auto& corpus = *ctx.corpus;
  if (!corpus.has_author_names()) ctx.warn("no author name file; author keys used as names");
  const auto clusters = disambiguate(corpus, ctx.config.authors, ctx.config.threads);
  write_clusters_csv(corpus, clusters, ctx.out("clusters.csv"));
  std::vector<AuthorStats> qj, uj;
  if (auto matches = ctx.matches(); matches) {
    const auto groups = matched_groups(*matches);
    qj = author_demographics(corpus, clusters, groups.questioned);
    uj = author_demographics(corpus, clusters, groups.controls);
  } else {
    qj = author_demographics(corpus, clusters, true);
    uj = author_demographics(corpus, clusters, false);
  }
  write_author_stats_csv(qj, uj, ctx.out("author_stats.csv"));
}

void stage_synth(Context& ctx) {
  const auto& config = ctx.config;
  std::vector<ScenarioPoint> points;
  for (auto s : {Scenario::a, Scenario::b, Scenario::c}) {
    auto curve = psi_scenarios(s);
    points.insert(points.end(), curve.begin(), curve.end());
  }
  write_scenarios_csv(points, ctx.out("synth_psi_scenarios.csv"));

  SynthConfig synth = config.synth;
  synth.seed = derive_seed(config.seed, kSynthStream);
  RewireConfig rewire = config.rewire;
  rewire.seed = derive_seed(config.seed, kRewireStream);
  const auto experiment = psi_rewiring_experiment(synth, rewire, config.threads);
  if (experiment.dropped_stubs) ctx.warn(fmt::format("{} out-stubs without admissible target", experiment.dropped_stubs));
  write_rewire_csv(experiment.curves, ctx.out("synth_psi_rewire.csv"));

  csv::Writer fairness({"publisher", "ensemble", "mean_psi"});
  for (std::size_t k = 0; k < experiment.initial_psi.size(); ++k)
    for (std::size_t e = 0; e < experiment.initial_psi[k].size(); ++e) {
      fairness.cell(fmt::format("P{}", k)).cell(e).cell(experiment.initial_psi[k][e]);
      fairness.end_row();
    }
  fairness.save(ctx.out("synth_fairness.csv"));

  SynthConfig first = synth;
  first.seed = derive_seed(synth.seed, 0);
  const auto net = generate_network(first);
  const auto in = net.in_degrees();
  const auto out = net.out_degrees();
  csv::Writer degrees({"paper", "journal", "in_degree", "out_degree"});
  for (std::size_t p = 0; p < net.paper_count(); ++p) {
    degrees.cell(p).cell(synthetic_journal_id(net, net.journal_of[p])).cell(in[p]).cell(out[p]);
    degrees.end_row();
  }
  degrees.save(ctx.out("synth_degrees.csv"));
}

struct StageSpec {
  const char* name;
  std::vector<const char*> requires_stages;  // hard dependencies when enabled
  bool needs_corpus;
  void (*run)(Context&);
};

const std::vector<StageSpec>& stage_specs() {
  static const std::vector<StageSpec> specs = {
      {"impact", {}, true, stage_impact},
      {"matching", {"impact"}, true, stage_matching},
      {"selfcite", {"matching"}, true, stage_selfcite},
      {"jnet", {"matching"}, true, stage_jnet},
      {"novelty", {}, true, stage_novelty},
      {"disruption", {}, true, stage_disruption},
      {"authors", {"matching"}, true, stage_authors},
      {"synth", {}, false, stage_synth},
  };
  return specs;
}

void write_manifest(const RunConfig& config, const RunReport& report) {
  json stages = json::array();
  for (const auto& s : report.stages)
    stages.push_back({{"name", s.name},
                      {"status", stage_status_name(s.status)},
                      {"seconds", s.seconds},
                      {"outputs", s.outputs},
                      {"warnings", s.warnings},
                      {"error", s.error}});
  json manifest = {{"config_hash", hex64(report.config_hash)},
                   {"partial", report.partial()},
                   {"stages", stages},
                   {"config", config.to_json()}};
  std::ofstream(config.output / "manifest.json") << manifest.dump(2) << '\n';
  const auto marker = config.output / "PARTIAL";
  if (report.partial())
    std::ofstream(marker) << "one or more stages failed or were skipped; see manifest.json\n";
  else
    fs::remove(marker);
}

}  // namespace

RunReport run_pipeline(const RunConfig& config) {
  fs::create_directories(config.output);
  RunReport report;
  report.config_hash = config.hash();
  Context ctx{config, std::nullopt, nullptr};

  auto timed = [&](StageResult& result, auto&& body) {
    ctx.current = &result;
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
      result.status = StageStatus::ok;
    } catch (const std::exception& e) {
      result.status = StageStatus::failed;
      result.error = e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const bool needs_corpus = std::any_of(stage_specs().begin(), stage_specs().end(),
                                        [&](const StageSpec& s) { return s.needs_corpus && config.enabled(s.name); });
  StageResult corpus_result;
  corpus_result.name = "corpus";
  if (needs_corpus) timed(corpus_result, [&] { stage_corpus(ctx); });
  report.stages.push_back(corpus_result);

  std::map<std::string, StageStatus> status;
  for (const auto& spec : stage_specs()) {
    StageResult result;
    result.name = spec.name;
    if (!config.enabled(spec.name)) {
      status[spec.name] = StageStatus::disabled;
      report.stages.push_back(result);
      continue;
    }
    std::string blocker;
    if (spec.needs_corpus && corpus_result.status != StageStatus::ok) blocker = "corpus";
    for (const char* dep : spec.requires_stages) {
      const auto s = status[dep];
      if (s == StageStatus::failed || s == StageStatus::skipped) blocker = dep;
    }
    if (!blocker.empty()) {
      result.status = StageStatus::skipped;
      result.error = fmt::format("dependency '{}' did not complete", blocker);
    } else {
      timed(result, [&] { spec.run(ctx); });
    }
    status[spec.name] = result.status;
    report.stages.push_back(std::move(result));
  }
  write_manifest(config, report);
  return report;
}

void write_binning_diagnostic(const RunConfig& config) {
  const auto corpus = load_corpus(config.corpus, config.format, config.years);
  const auto path = config.output / "impact.csv";
  if (!fs::exists(path)) throw Error("missing input impact.csv (produced by stage 'impact')");
  const auto lookup = read_impact_csv(path);
  const auto rows = binning_diagnostic(journal_profiles(corpus, config.matching.year, lookup, config.matching.basis));
  csv::Writer w({"scheme", "matched", "mean_impact_gap", "mean_size_gap"});
  for (const auto& d : rows) {
    w.cell(scheme_name(d.scheme)).cell(d.matched).cell(d.mean_impact_gap).cell(d.mean_size_gap);
    w.end_row();
  }
  w.save(config.output / "binning_diagnostic.csv");
}

}  // namespace citenet
