#include "citenet/matching.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "citenet/csv.hpp"
#include "citenet/stats.hpp"

namespace citenet {

std::string_view tercile_name(Tercile t) {
  switch (t) {
    case Tercile::large: return "large";
    case Tercile::moderate: return "moderate";
    case Tercile::small: return "small";
  }
  return "";
}

std::optional<Tercile> parse_tercile(std::string_view name) {
  if (name == "large") return Tercile::large;
  if (name == "moderate") return Tercile::moderate;
  if (name == "small") return Tercile::small;
  return std::nullopt;
}

std::string_view scheme_name(BinScheme scheme) {
  switch (scheme) {
    case BinScheme::terciles: return "terciles";
    case BinScheme::quartiles: return "quartiles";
    case BinScheme::log_sigma: return "log_sigma";
  }
  return "";
}

bool JournalProfile::in_category(const std::string& category) const {
  return std::find(categories.begin(), categories.end(), category) != categories.end();
}

BinAssignment assign_bins(std::span<const JournalProfile> profiles, const std::string& category, BinScheme scheme) {
  std::vector<const JournalProfile*> active;
  for (const auto& p : profiles)
    if (p.active() && p.in_category(category)) active.push_back(&p);
  std::sort(active.begin(), active.end(), [](const JournalProfile* a, const JournalProfile* b) {
    if (a->size != b->size) return a->size > b->size;
    return a->id < b->id;
  });

  BinAssignment out;
  const std::size_t n = active.size();
  if (n < 3) {
    out.degenerate = n > 0;
    for (auto* p : active) out.bins[p->journal] = 0;
    return out;
  }
  if (scheme == BinScheme::log_sigma) {
    std::vector<double> logs;
    for (auto* p : active) logs.push_back(std::log10(static_cast<double>(p->size)));
    const double m = *stats::mean(logs);
    const double s = *stats::stddev(logs);
    for (std::size_t r = 0; r < n; ++r) {
      const double v = logs[r];
      out.bins[active[r]->journal] = v > m + s ? 0 : (v < m - s ? 2 : 1);
    }
    return out;
  }
  const std::size_t k = scheme == BinScheme::terciles ? 3 : 4;
  for (std::size_t r = 0; r < n; ++r) out.bins[active[r]->journal] = static_cast<int>(k * r / n);
  return out;
}

TercileAssignment assign_terciles(std::span<const JournalProfile> profiles, const std::string& category) {
  const auto bins = assign_bins(profiles, category, BinScheme::terciles);
  TercileAssignment out;
  out.degenerate = bins.degenerate;
  for (const auto& [j, b] : bins.bins) out.terciles[j] = static_cast<Tercile>(b);
  return out;
}

namespace {

JournalProfile base_profile(const Corpus& corpus, JournalIndex j, int year) {
  const auto& journal = corpus.journal(j);
  JournalProfile p;
  p.journal = j;
  p.id = journal.id;
  p.categories = journal.categories;
  p.questionable = journal.questionable;
  p.size = journal.paper_count(year);
  return p;
}

}  // namespace

std::vector<JournalProfile> journal_profiles(const Corpus& corpus, int year, const ImpactLookup& impacts,
                                             ImpactBasis basis) {
  std::vector<JournalProfile> profiles;
  for (JournalIndex j = 0; j < corpus.journals().size(); ++j) {
    auto p = base_profile(corpus, j, year);
    auto it = impacts.find({p.id, year});
    if (it != impacts.end())
      p.impact = basis == ImpactBasis::normalized ? it->second.normalized_impact : it->second.impact;
    profiles.push_back(std::move(p));
  }
  return profiles;
}

std::vector<JournalProfile> journal_profiles(const Corpus& corpus, int year, const NormalizationTable* table,
                                             ImpactBasis basis) {
  std::vector<JournalProfile> profiles;
  for (JournalIndex j = 0; j < corpus.journals().size(); ++j) {
    auto p = base_profile(corpus, j, year);
    if (auto impact = journal_impact(corpus, j, year)) {
      if (basis == ImpactBasis::raw || table == nullptr) p.impact = impact->value();
      else if (table->contains(year)) p.impact = normalize_citations(impact->value(), year, *table);
    }
    profiles.push_back(std::move(p));
  }
  return profiles;
}

TercileAssignment size_terciles(const Corpus& corpus, const std::string& category, int year) {
  const auto profiles = journal_profiles(corpus, year, nullptr, ImpactBasis::raw);
  return assign_terciles(profiles, category);
}

MatchingRegistry::MatchingRegistry(std::vector<JournalProfile> profiles, BinScheme scheme)
    : profiles_(std::move(profiles)), scheme_(scheme) {
  std::set<std::string> categories;
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    position_[profiles_[i].journal] = i;
    categories.insert(profiles_[i].categories.begin(), profiles_[i].categories.end());
  }
  for (const auto& c : categories) bins_.emplace(c, assign_bins(profiles_, c, scheme_));
}

const JournalProfile* MatchingRegistry::find(JournalIndex journal) const {
  auto it = position_.find(journal);
  return it == position_.end() ? nullptr : &profiles_[it->second];
}

const BinAssignment& MatchingRegistry::bins(const std::string& category) const {
  static const BinAssignment empty;
  auto it = bins_.find(category);
  return it == bins_.end() ? empty : it->second;
}

std::vector<MatchRecord> MatchingRegistry::select_control(JournalIndex qj) const {
  const JournalProfile* target = find(qj);
  if (target == nullptr) throw Error(fmt::format("select_control: journal index {} not in registry", qj));
  std::vector<MatchRecord> records;
  for (const auto& category : target->categories) {
    MatchRecord record;
    record.qj = qj;
    record.qj_id = target->id;
    record.category = category;
    const auto& bins = this->bins(category);
    auto qj_bin = bins.bins.find(qj);
    if (!target->impact || qj_bin == bins.bins.end()) {
      records.push_back(std::move(record));
      continue;
    }
    if (scheme_ == BinScheme::terciles) record.tercile = static_cast<Tercile>(qj_bin->second);

    const JournalProfile* best = nullptr;
    double best_gap = 0, best_size_gap = 0;
    for (const auto& [j, bin] : bins.bins) {
      if (bin != qj_bin->second || j == qj) continue;
      const JournalProfile& c = *find(j);
      if (c.questionable || !c.impact) continue;
      const double gap = std::abs(*c.impact - *target->impact);
      const double size_gap = std::abs(static_cast<double>(c.size) - static_cast<double>(target->size));
      const bool better = best == nullptr || gap < best_gap ||
                          (gap == best_gap && (size_gap < best_size_gap || (size_gap == best_size_gap && c.id < best->id)));
      if (better) {
        best = &c;
        best_gap = gap;
        best_size_gap = size_gap;
      }
    }
    if (best != nullptr) {
      record.uj = best->journal;
      record.uj_id = best->id;
      record.impact_gap = best_gap;
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<MatchRecord> MatchingRegistry::match_all() const {
  std::vector<const JournalProfile*> questioned;
  for (const auto& p : profiles_)
    if (p.questionable && p.impact) questioned.push_back(&p);
  std::sort(questioned.begin(), questioned.end(),
            [](const JournalProfile* a, const JournalProfile* b) { return a->id < b->id; });
  std::vector<MatchRecord> out;
  for (auto* q : questioned)
    for (auto& r : select_control(q->journal)) out.push_back(std::move(r));
  return out;
}

std::vector<MatchRecord> select_control(const Corpus& corpus, JournalIndex qj, int year,
                                        const NormalizationTable* table, ImpactBasis basis) {
  MatchingRegistry registry(journal_profiles(corpus, year, table, basis));
  return registry.select_control(qj);
}

std::vector<BinningDiagnostic> binning_diagnostic(const std::vector<JournalProfile>& profiles) {
  std::vector<BinningDiagnostic> out;
  for (auto scheme : {BinScheme::log_sigma, BinScheme::terciles, BinScheme::quartiles}) {
    MatchingRegistry registry(profiles, scheme);
    BinningDiagnostic d;
    d.scheme = scheme;
    std::vector<double> impact_gaps, size_gaps;
    for (const auto& r : registry.match_all()) {
      if (!r.uj) continue;
      impact_gaps.push_back(*r.impact_gap);
      size_gaps.push_back(std::abs(static_cast<double>(registry.find(*r.uj)->size) -
                                   static_cast<double>(registry.find(r.qj)->size)));
    }
    d.matched = impact_gaps.size();
    d.mean_impact_gap = stats::mean(impact_gaps);
    d.mean_size_gap = stats::mean(size_gaps);
    out.push_back(d);
  }
  return out;
}

void write_matches_csv(const std::vector<MatchRecord>& matches, const std::filesystem::path& path) {
  csv::Writer w({"qj_id", "category", "uj_id", "impact_gap", "tercile"});
  for (const auto& m : matches) {
    w.cell(m.qj_id).cell(m.category).cell(m.uj_id).cell(m.impact_gap);
    w.cell(m.tercile ? tercile_name(*m.tercile) : std::string_view{});
    w.end_row();
  }
  w.save(path);
}

std::vector<MatchRecord> read_matches_csv(const Corpus& corpus, const std::filesystem::path& path) {
  auto table = csv::Table::read(path);
  const auto qj = table.require_column("qj_id");
  const auto category = table.require_column("category");
  const auto uj = table.require_column("uj_id");
  const auto gap = table.require_column("impact_gap");
  const auto tercile = table.require_column("tercile");
  std::vector<MatchRecord> out;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    const std::string where = fmt::format("{}:{}", table.source(), table.line(r));
    MatchRecord m;
    auto q = corpus.find_journal(row[qj]);
    if (!q) throw Error(fmt::format("{}: field 'qj_id': unknown journal '{}'", where, row[qj]));
    m.qj = *q;
    m.qj_id = row[qj];
    m.category = row[category];
    if (!row[uj].empty()) {
      auto u = corpus.find_journal(row[uj]);
      if (!u) throw Error(fmt::format("{}: field 'uj_id': unknown journal '{}'", where, row[uj]));
      m.uj = *u;
      m.uj_id = row[uj];
    }
    if (!row[gap].empty()) m.impact_gap = std::stod(row[gap]);
    m.tercile = parse_tercile(row[tercile]);
    out.push_back(std::move(m));
  }
  return out;
}

MatchedGroups matched_groups(std::span<const MatchRecord> matches) {
  MatchedGroups g;
  for (const auto& m : matches)
    if (m.uj && m.qj != kNoIndex) {
      g.questioned.push_back(m.qj);
      g.controls.push_back(*m.uj);
    }
  for (auto* v : {&g.questioned, &g.controls}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return g;
}

}  // namespace citenet
