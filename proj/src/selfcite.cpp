#include "citenet/selfcite.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "citenet/csv.hpp"
#include "citenet/stats.hpp"

namespace citenet {

SparseCounts<double> journal_citation_counts(const Corpus& corpus, YearWindow window) {
  const auto n = static_cast<Eigen::Index>(corpus.journals().size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(corpus.edge_count());
  const auto papers = static_cast<PaperIndex>(corpus.papers().size());
  for (PaperIndex p = 0; p < papers; ++p) {
    const auto& citing = corpus.paper(p);
    if (citing.journal == kNoIndex || !window.contains(citing.year)) continue;
    for (auto target : corpus.references(p)) {
      const auto cited = corpus.paper(target).journal;
      if (cited == kNoIndex) continue;
      triplets.emplace_back(static_cast<Eigen::Index>(citing.journal), static_cast<Eigen::Index>(cited), 1.0);
    }
  }
  SparseCounts<double> counts(n, n);
  counts.setFromTriplets(triplets.begin(), triplets.end());
  return counts;
}

Vector<double> journal_paper_counts(const Corpus& corpus, YearWindow window) {
  Vector<double> sizes(static_cast<Eigen::Index>(corpus.journals().size()));
  for (JournalIndex j = 0; j < corpus.journals().size(); ++j)
    sizes(static_cast<Eigen::Index>(j)) = static_cast<double>(corpus.journal(j).paper_count(window));
  return sizes;
}

std::vector<std::vector<JournalIndex>> publisher_journal_lists(const Corpus& corpus) {
  std::vector<std::vector<JournalIndex>> lists(corpus.publishers().size());
  for (PublisherIndex p = 0; p < corpus.publishers().size(); ++p) {
    lists[p] = corpus.publisher(p).journals;
    std::sort(lists[p].begin(), lists[p].end());
  }
  return lists;
}

std::vector<SolidarityScore<double>> solidarity_scores(const Corpus& corpus, const PsiOptions& options) {
  const auto counts = journal_citation_counts(corpus, options.window);
  const auto sizes = journal_paper_counts(corpus, options.window);
  const auto totals = count_totals(counts);
  std::vector<SolidarityScore<double>> scores(corpus.journals().size());
  for (JournalIndex j = 0; j < scores.size(); ++j) {
    scores[j].journal = j;
    scores[j].status = ScoreStatus::excluded;
  }
  for (const auto& members : publisher_journal_lists(corpus)) {
    if (members.empty()) continue;
    for (auto& s : publisher_solidarity(counts, totals, sizes, members, {options.include_self}))
      scores[s.journal] = s;
  }
  return scores;
}

void write_solidarity_csv(const Corpus& corpus, const std::vector<SolidarityScore<double>>& scores,
                          const std::filesystem::path& path) {
  csv::Writer w({"journal_id", "psi", "Q_r", "Q_c", "publisher_paper_total"});
  for (const auto& s : scores) {
    if (s.status == ScoreStatus::excluded) continue;
    w.cell(corpus.journal(s.journal).id).cell(s.psi).cell(s.q_r).cell(s.q_c).cell(s.publisher_paper_total);
    w.end_row();
  }
  w.save(path);
}

std::vector<JournalIndex> resolve_group(const Corpus& corpus, GroupKind kind, const std::vector<std::string>& ids) {
  std::vector<JournalIndex> members;
  switch (kind) {
    case GroupKind::all:
      for (JournalIndex j = 0; j < corpus.journals().size(); ++j) members.push_back(j);
      break;
    case GroupKind::journal:
    case GroupKind::journal_set:
      if (kind == GroupKind::journal && ids.size() != 1)
        throw Error(fmt::format("single-journal group needs exactly one id, got {}", ids.size()));
      for (const auto& id : ids) {
        auto j = corpus.find_journal(id);
        if (!j) throw Error(fmt::format("unknown journal '{}'", id));
        members.push_back(*j);
      }
      break;
    case GroupKind::publisher:
    case GroupKind::publisher_set:
      if (kind == GroupKind::publisher && ids.size() != 1)
        throw Error(fmt::format("single-publisher group needs exactly one id, got {}", ids.size()));
      for (const auto& id : ids) {
        auto p = corpus.find_publisher(id);
        if (!p) throw Error(fmt::format("unknown publisher '{}'", id));
        const auto& js = corpus.publisher(*p).journals;
        members.insert(members.end(), js.begin(), js.end());
      }
      break;
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) throw Error("rate query group is empty");
  return members;
}

namespace {

std::optional<double> evaluate_with(const SparseCounts<double>& counts, const Corpus& corpus, const RateQuery& q) {
  if (q.source_kind != GroupKind::journal && q.source_kind != GroupKind::publisher)
    throw Error("rate query source must be a journal or a publisher");
  const auto n = counts.rows();
  const auto source = indicator<double>(n, resolve_group(corpus, q.source_kind, {q.source_id}));
  const auto target = indicator<double>(n, resolve_group(corpus, q.target_kind, q.target_ids));
  return q.kind == RateKind::citation ? citation_rate(counts, source, target) : reference_rate(counts, source, target);
}

GroupKind parse_group(const std::string& s, const std::string& where) {
  if (s == "journal") return GroupKind::journal;
  if (s == "journal_set") return GroupKind::journal_set;
  if (s == "publisher") return GroupKind::publisher;
  if (s == "publisher_set") return GroupKind::publisher_set;
  if (s == "all") return GroupKind::all;
  throw Error(fmt::format("{}: unknown group type '{}'", where, s));
}

const char* group_name(GroupKind k) {
  switch (k) {
    case GroupKind::journal: return "journal";
    case GroupKind::journal_set: return "journal_set";
    case GroupKind::publisher: return "publisher";
    case GroupKind::publisher_set: return "publisher_set";
    case GroupKind::all: return "all";
  }
  return "";
}

}  // namespace

std::optional<double> evaluate_rate(const Corpus& corpus, const RateQuery& query) {
  return evaluate_with(journal_citation_counts(corpus, query.window), corpus, query);
}

std::vector<RateQuery> read_rate_queries(const std::filesystem::path& path) {
  auto table = csv::Table::read(path);
  const auto kind = table.require_column("kind");
  const auto source_type = table.require_column("source_type");
  const auto source_id = table.require_column("source_id");
  const auto target_type = table.require_column("target_type");
  const auto target_ids = table.require_column("target_ids");
  const auto first = table.require_column("first_year");
  const auto last = table.require_column("last_year");
  std::vector<RateQuery> queries;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    const std::string where = fmt::format("{}:{}", table.source(), table.line(r));
    RateQuery q;
    if (row[kind] == "citation") q.kind = RateKind::citation;
    else if (row[kind] == "reference") q.kind = RateKind::reference;
    else throw Error(fmt::format("{}: field 'kind': expected citation or reference", where));
    q.source_kind = parse_group(row[source_type], where);
    q.source_id = row[source_id];
    q.target_kind = parse_group(row[target_type], where);
    q.target_ids = csv::split(row[target_ids], ';');
    try {
      if (!row[first].empty()) q.window.first = std::stoi(row[first]);
      if (!row[last].empty()) q.window.last = std::stoi(row[last]);
    } catch (const std::exception&) {
      throw Error(fmt::format("{}: field 'first_year'/'last_year': expected integer", where));
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

void write_rates_csv(const Corpus& corpus, const std::vector<RateQuery>& queries, const std::filesystem::path& path) {
  csv::Writer w({"kind", "source_type", "source_id", "target_type", "target_ids", "first_year", "last_year", "rate"});
  std::map<std::pair<int, int>, SparseCounts<double>> cache;
  for (const auto& q : queries) {
    auto key = std::make_pair(q.window.first, q.window.last);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, journal_citation_counts(corpus, q.window)).first;
    std::string ids;
    for (const auto& id : q.target_ids) ids += (ids.empty() ? "" : ";") + id;
    w.cell(q.kind == RateKind::citation ? "citation" : "reference").cell(group_name(q.source_kind)).cell(q.source_id);
    w.cell(group_name(q.target_kind)).cell(ids);
    if (q.window.first == YearWindow::all().first) w.cell(""); else w.cell(q.window.first);
    if (q.window.last == YearWindow::all().last) w.cell(""); else w.cell(q.window.last);
    w.cell(evaluate_with(it->second, corpus, q));
    w.end_row();
  }
  w.save(path);
}

std::string_view self_level_name(SelfLevel level) {
  switch (level) {
    case SelfLevel::journal: return "journal";
    case SelfLevel::group: return "group";
    case SelfLevel::publisher: return "publisher";
  }
  return "?";
}

std::vector<SelfRateSummary> self_rate_summary(
    const Corpus& corpus, const std::vector<std::pair<std::string, std::vector<JournalIndex>>>& groups,
    YearWindow years) {
  const auto n = static_cast<Eigen::Index>(corpus.journals().size());
  const auto publishers = publisher_journal_lists(corpus);
  int first = std::numeric_limits<int>::max(), last = std::numeric_limits<int>::min();
  for (const auto& p : corpus.papers())
    if (years.contains(p.year)) {
      first = std::min(first, p.year);
      last = std::max(last, p.year);
    }
  std::vector<SelfRateSummary> rows;
  for (int year = first; year <= last; ++year) {
    const auto counts = journal_citation_counts(corpus, YearWindow::single(year));
    for (const auto& [name, members] : groups) {
      const Vector<double> group = indicator<double>(n, members);
      for (auto level : {SelfLevel::journal, SelfLevel::group, SelfLevel::publisher})
        for (auto kind : {RateKind::citation, RateKind::reference}) {
          std::vector<double> values;
          for (auto j : members) {
            const Vector<double> self = indicator<double>(n, std::span<const JournalIndex>(&j, 1));
            Vector<double> target;
            if (level == SelfLevel::journal) target = self;
            if (level == SelfLevel::group) target = group;
            if (level == SelfLevel::publisher) {
              const auto pub = corpus.journal(j).publisher;
              if (pub == kNoIndex) continue;
              target = indicator<double>(n, publishers[pub]);
            }
            const auto rate = kind == RateKind::citation ? citation_rate(counts, self, target)
                                                         : reference_rate(counts, self, target);
            if (rate) values.push_back(*rate);
          }
          SelfRateSummary row;
          row.level = level;
          row.group = name;
          row.year = year;
          row.kind = kind;
          row.n = values.size();
          row.mean = stats::mean(values);
          if (row.mean) {
            const double half = 1.96 * *stats::stddev(values) / std::sqrt(static_cast<double>(values.size()));
            row.ci_low = *row.mean - half;
            row.ci_high = *row.mean + half;
          }
          rows.push_back(std::move(row));
        }
    }
  }
  return rows;
}

void write_self_rates_csv(std::span<const SelfRateSummary> rows, const std::filesystem::path& path) {
  csv::Writer w({"level", "group", "year", "kind", "mean", "ci_low", "ci_high", "n"});
  for (const auto& r : rows) {
    w.cell(self_level_name(r.level)).cell(r.group).cell(r.year);
    w.cell(r.kind == RateKind::citation ? "citation" : "reference");
    w.cell(r.mean).cell(r.ci_low).cell(r.ci_high).cell(r.n);
    w.end_row();
  }
  w.save(path);
}

}  // namespace citenet
