#include "citenet/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "citenet/csv.hpp"

namespace citenet {

namespace fs = std::filesystem;

namespace {

struct Inputs {
  const RunConfig& config;
  std::optional<Corpus> corpus;

  fs::path file(const std::string& name, const char* stage) const {
    auto p = config.output / name;
    if (!fs::exists(p)) throw Error(fmt::format("missing input {} (produced by stage '{}')", name, stage));
    return p;
  }
  csv::Table table(const std::string& name, const char* stage) const { return csv::Table::read(file(name, stage)); }
  const Corpus& load_corpus() {
    if (!corpus) corpus = citenet::load_corpus(config.corpus, config.format, config.years);
    return *corpus;
  }
  // Group label of each journal: QJ / UJ for matched journals.
  std::map<JournalIndex, std::string> groups() {
    const auto& c = load_corpus();
    const auto g = matched_groups(read_matches_csv(c, file("matches.csv", "matching")));
    std::map<JournalIndex, std::string> out;
    for (auto j : g.controls) out[j] = "UJ";
    for (auto j : g.questioned) out[j] = "QJ";
    return out;
  }
};

std::optional<double> number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return std::stod(cell);
}

fs::path passthrough(Inputs& in, const std::string& name, const char* stage, const fs::path& target) {
  fs::create_directories(target.parent_path());
  fs::copy_file(in.file(name, stage), target, fs::copy_options::overwrite_existing);
  return target;
}

void self_rates(Inputs& in, std::string_view level, csv::Writer& w) {
  const auto t = in.table("self_rates.csv", "selfcite");
  const auto lv = t.require_column("level");
  std::vector<std::size_t> cols;
  for (const char* c : {"group", "year", "kind", "mean", "ci_low", "ci_high", "n"}) cols.push_back(t.require_column(c));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (t.row(r)[lv] != level) continue;
    for (auto c : cols) w.cell(t.row(r)[c]);
    w.end_row();
  }
}

void market_share_top(Inputs& in, csv::Writer& w) {
  const auto t = in.table("market_share.csv", "impact");
  const auto pub = t.require_column("publisher_id"), year = t.require_column("year"),
             share = t.require_column("market_share");
  std::map<std::string, double> total;
  for (std::size_t r = 0; r < t.rows(); ++r) total[t.row(r)[pub]] += number(t.row(r)[share]).value_or(0.0);
  std::vector<std::pair<std::string, double>> ranked(total.begin(), total.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.second > b.second; });
  std::set<std::string> top;
  for (std::size_t k = 0; k < ranked.size() && k < 10; ++k) top.insert(ranked[k].first);
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (top.count(t.row(r)[pub])) {
      w.cell(t.row(r)[pub]).cell(t.row(r)[year]).cell(t.row(r)[share]);
      w.end_row();
    }
}

void psi_ratio(Inputs& in, csv::Writer& w) {
  const auto& corpus = in.load_corpus();
  const auto matches = read_matches_csv(corpus, in.file("matches.csv", "matching"));
  const auto psi_table = in.table("solidarity.csv", "selfcite");
  const auto id = psi_table.require_column("journal_id"), psi = psi_table.require_column("psi"),
             size = psi_table.require_column("publisher_paper_total");
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> scores;
  for (std::size_t r = 0; r < psi_table.rows(); ++r)
    scores[psi_table.row(r)[id]] = {number(psi_table.row(r)[psi]), number(psi_table.row(r)[size])};
  const auto impacts = read_impact_csv(in.file("impact.csv", "impact"));
  const int year = in.config.matching.year;
  for (const auto& m : matches) {
    if (!m.uj) continue;
    auto q = scores.find(m.qj_id), u = scores.find(m.uj_id);
    if (q == scores.end() || u == scores.end() || !q->second.first || !u->second.first || *u->second.first == 0.0)
      continue;
    std::optional<double> impact;
    if (auto it = impacts.find({m.qj_id, year}); it != impacts.end())
      impact = in.config.matching.basis == ImpactBasis::raw ? it->second.impact : it->second.normalized_impact;
    std::optional<double> relative;
    if (q->second.second && u->second.second && *u->second.second > 0.0)
      relative = *q->second.second / *u->second.second;
    w.cell(m.qj_id).cell(*q->second.first / *u->second.first).cell(relative).cell(impact);
    w.end_row();
  }
}

void centrality_pairs(Inputs& in, csv::Writer& w) {
  const auto& cfg = in.config.jnet;
  if (cfg.years.empty() || cfg.windows.empty() || cfg.link_types.empty()) throw Error("no network configured");
  const auto& corpus = in.load_corpus();
  const auto matches = read_matches_csv(corpus, in.file("matches.csv", "matching"));
  for (auto metric : cfg.metrics) {
    const auto t = in.table(centrality_file_name(metric, cfg.years.front(), cfg.windows.front(), cfg.link_types.front()),
                            "jnet");
    const auto id = t.require_column("journal_id"), score = t.require_column("score");
    std::map<std::string, double> s;
    for (std::size_t r = 0; r < t.rows(); ++r) s[t.row(r)[id]] = std::stod(t.row(r)[score]);
    for (const auto& m : matches) {
      if (!m.uj || !s.count(m.qj_id) || !s.count(m.uj_id)) continue;
      const double q = s[m.qj_id], u = s[m.uj_id];
      std::optional<double> diff;
      if (q > 0.0 && u > 0.0) diff = std::log10(u) - std::log10(q);
      w.cell(metric_name(metric)).cell(m.qj_id).cell(m.uj_id).cell(q).cell(u).cell(diff);
      w.end_row();
    }
  }
}

void citations(Inputs& in, csv::Writer& w) {
  const auto groups = in.groups();
  const auto& corpus = in.load_corpus();
  for (PaperIndex p = 0; p < corpus.papers().size(); ++p) {
    auto g = groups.find(corpus.paper(p).journal);
    if (g == groups.end()) continue;
    w.cell(corpus.paper(p).id).cell(g->second).cell(corpus.citers(p).size());
    w.end_row();
  }
}

void novelty_by_group(Inputs& in, csv::Writer& w) {
  const auto t = in.table("novelty.csv", "novelty");
  const auto groups = in.groups();
  const auto& corpus = in.load_corpus();
  const auto id = t.require_column("paper_id"), med = t.require_column("median_z"), p10 = t.require_column("p10_z");
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const auto p = corpus.find_paper(t.row(r)[id]);
    if (!p) continue;
    auto g = groups.find(corpus.paper(*p).journal);
    if (g == groups.end()) continue;
    w.cell(t.row(r)[id]).cell(g->second).cell(t.row(r)[med]).cell(t.row(r)[p10]);
    w.end_row();
  }
}

// Mean D per (group, key column) over rows with a defined D.
void disruption_means(Inputs& in, const char* key, csv::Writer& w) {
  const auto t = in.table("disruption.csv", "disruption");
  const auto groups = in.groups();
  const auto& corpus = in.load_corpus();
  const auto id = t.require_column("paper_id"), d = t.require_column("D"), k = t.require_column(key);
  std::map<std::pair<std::string, long long>, std::pair<double, std::size_t>> acc;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const auto value = number(t.row(r)[d]);
    const auto p = corpus.find_paper(t.row(r)[id]);
    if (!value || !p) continue;
    auto g = groups.find(corpus.paper(*p).journal);
    if (g == groups.end()) continue;
    auto& slot = acc[{g->second, std::stoll(t.row(r)[k])}];
    slot.first += *value;
    ++slot.second;
  }
  for (const auto& [key_pair, sum] : acc) {
    w.cell(key_pair.first).cell(key_pair.second).cell(sum.first / static_cast<double>(sum.second)).cell(sum.second);
    w.end_row();
  }
}

}  // namespace

const std::vector<std::string_view>& figure_ids() {
  static const std::vector<std::string_view> ids = {"2B", "2C", "2D", "2E", "2F", "3",   "4A",
                                                    "4B", "4C", "4D", "S15", "S16", "S18", "S19"};
  return ids;
}

fs::path emit_plot_data(const RunConfig& config, std::string_view figure_id) {
  if (std::find(figure_ids().begin(), figure_ids().end(), figure_id) == figure_ids().end())
    throw Error(fmt::format("unknown figure id '{}'", figure_id));
  Inputs in{config, std::nullopt};
  const fs::path target = config.output / "figures" / fmt::format("fig_{}.csv", figure_id);

  if (figure_id == "4D") return passthrough(in, "author_stats.csv", "authors", target);
  if (figure_id == "S15") return passthrough(in, "synth_psi_scenarios.csv", "synth", target);
  if (figure_id == "S16") return passthrough(in, "synth_degrees.csv", "synth", target);
  if (figure_id == "S18") return passthrough(in, "synth_psi_rewire.csv", "synth", target);

  if (figure_id == "2B" || figure_id == "2C" || figure_id == "2D") {
    csv::Writer w({"group", "year", "kind", "mean", "ci_low", "ci_high", "n"});
    self_rates(in, figure_id == "2B" ? "journal" : figure_id == "2C" ? "group" : "publisher", w);
    w.save(target);
  } else if (figure_id == "2E") {
    csv::Writer w({"publisher_id", "year", "market_share"});
    market_share_top(in, w);
    w.save(target);
  } else if (figure_id == "2F") {
    csv::Writer w({"qj_id", "psi_ratio", "relative_publisher_size", "qj_impact"});
    psi_ratio(in, w);
    w.save(target);
  } else if (figure_id == "3") {
    csv::Writer w({"metric", "qj_id", "uj_id", "qj_score", "uj_score", "log_difference"});
    centrality_pairs(in, w);
    w.save(target);
  } else if (figure_id == "4A") {
    csv::Writer w({"paper_id", "group", "citations"});
    citations(in, w);
    w.save(target);
  } else if (figure_id == "4B") {
    csv::Writer w({"paper_id", "group", "median_z", "p10_z"});
    novelty_by_group(in, w);
    w.save(target);
  } else if (figure_id == "4C") {
    csv::Writer w({"group", "author_count", "mean_d", "n"});
    disruption_means(in, "author_count", w);
    w.save(target);
  } else if (figure_id == "S19") {
    csv::Writer w({"group", "year", "mean_d", "n"});
    disruption_means(in, "year", w);
    w.save(target);
  }
  return target;
}

}  // namespace citenet
