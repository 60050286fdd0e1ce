#include "citenet/impact.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

#include "citenet/csv.hpp"
#include "citenet/parallel.hpp"
#include "citenet/stats.hpp"

namespace citenet {

std::optional<Ratio> journal_impact(const Corpus& corpus, JournalIndex journal, int year) {
  Ratio r{0, 0};
  for (auto p : corpus.journal_papers(journal)) {
    const int published = corpus.paper(p).year;
    if (published != year - 1 && published != year - 2) continue;
    ++r.denominator;
    for (auto citer : corpus.citers(p))
      if (corpus.paper(citer).year == year) ++r.numerator;
  }
  if (r.denominator == 0) return std::nullopt;
  return r;
}

NormalizationTable NormalizationTable::from_corpus(const Corpus& corpus, int reference_year) {
  std::map<std::string, std::uint64_t> received;
  const auto n = static_cast<PaperIndex>(corpus.papers().size());
  for (PaperIndex p = 0; p < n; ++p) {
    if (corpus.paper(p).year != reference_year) continue;
    for (auto target : corpus.references(p)) {
      const auto j = corpus.paper(target).journal;
      if (j == kNoIndex) continue;
      for (const auto& category : corpus.journal(j).categories) ++received[category];
    }
  }
  if (received.empty())
    throw Error(fmt::format("normalization: no citations made in reference year {}", reference_year));
  // std::map iterates codes in ascending order, so the first maximum wins ties.
  auto top = received.begin();
  for (auto it = received.begin(); it != received.end(); ++it)
    if (it->second > top->second) top = it;

  NormalizationTable table;
  table.reference_year = reference_year;
  table.field = top->first;
  for (const auto& journal : corpus.journals()) {
    if (std::find(journal.categories.begin(), journal.categories.end(), table.field) == journal.categories.end())
      continue;
    for (const auto& [y, count] : journal.paper_count_by_year) table.top_field_articles[y] += static_cast<double>(count);
  }
  if (!table.contains(reference_year))
    throw Error(fmt::format("normalization: field {} has no articles in {}", table.field, reference_year));
  return table;
}

NormalizationTable NormalizationTable::load(const std::filesystem::path& path) {
  auto csv = csv::Table::read(path);
  const auto ref = csv.require_column("reference_year");
  const auto year = csv.require_column("year");
  const auto count = csv.require_column("n_top");
  NormalizationTable table;
  auto parse_int = [&](const std::string& s, std::size_t r, const char* field) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw Error(fmt::format("{}:{}: field '{}': expected integer", csv.source(), csv.line(r), field));
    return v;
  };
  for (std::size_t r = 0; r < csv.rows(); ++r) {
    table.reference_year = parse_int(csv.row(r)[ref], r, "reference_year");
    const int y = parse_int(csv.row(r)[year], r, "year");
    double n = 0;
    try {
      n = std::stod(csv.row(r)[count]);
    } catch (const std::exception&) {
      throw Error(fmt::format("{}:{}: field 'n_top': expected number", csv.source(), csv.line(r)));
    }
    if (!(n > 0)) throw Error(fmt::format("{}:{}: field 'n_top': must be positive", csv.source(), csv.line(r)));
    table.top_field_articles[y] = n;
  }
  if (!table.contains(table.reference_year))
    throw Error(fmt::format("{}: reference year {} missing", csv.source(), table.reference_year));
  return table;
}

void NormalizationTable::save(const std::filesystem::path& path) const {
  csv::Writer w({"reference_year", "year", "n_top"});
  for (const auto& [year, count] : top_field_articles) {
    w.cell(reference_year).cell(year).cell(count);
    w.end_row();
  }
  w.save(path);
}

double normalize_citations(double count, int year, const NormalizationTable& table) {
  auto it = table.top_field_articles.find(year);
  if (it == table.top_field_articles.end())
    throw Error(fmt::format("normalization table has no entry for year {}", year));
  const double reference = table.top_field_articles.at(table.reference_year);
  return count / (it->second / reference);
}

std::optional<double> immediacy_index(const Corpus& corpus, JournalIndex journal, int year) {
  std::size_t papers = 0, citations = 0;
  for (auto p : corpus.journal_papers(journal)) {
    if (corpus.paper(p).year != year) continue;
    ++papers;
    for (auto citer : corpus.citers(p))
      if (corpus.paper(citer).year == year) ++citations;
  }
  if (papers == 0) return std::nullopt;
  return static_cast<double>(citations) / static_cast<double>(papers);
}

std::optional<double> cited_half_life(const Corpus& corpus, JournalIndex journal, int year) {
  std::vector<double> ages;
  for (auto p : corpus.journal_papers(journal)) {
    if (corpus.paper(p).year != year) continue;
    for (auto citer : corpus.citers(p)) ages.push_back(corpus.paper(citer).year - year);
  }
  return stats::median(std::move(ages));
}

std::optional<double> citing_half_life(const Corpus& corpus, JournalIndex journal, int year) {
  std::vector<double> ages;
  for (auto p : corpus.journal_papers(journal)) {
    if (corpus.paper(p).year != year) continue;
    for (auto ref : corpus.references(p)) ages.push_back(year - corpus.paper(ref).year);
  }
  return stats::median(std::move(ages));
}

std::optional<double> market_share(const Corpus& corpus, PublisherIndex publisher, int year) {
  std::size_t mine = 0, known = 0;
  for (const auto& journal : corpus.journals()) {
    if (journal.publisher == kNoIndex) continue;
    const auto count = journal.paper_count(year);
    known += count;
    if (journal.publisher == publisher) mine += count;
  }
  if (known == 0) return std::nullopt;
  return static_cast<double>(mine) / static_cast<double>(known);
}

ImpactRecord impact_record(const Corpus& corpus, JournalIndex journal, int year, const NormalizationTable* table) {
  ImpactRecord record;
  record.journal = journal;
  record.year = year;
  record.impact = journal_impact(corpus, journal, year);
  if (record.impact) {
    record.eligible_paper_count = record.impact->denominator;
    if (table && table->contains(year))
      record.normalized_impact = normalize_citations(record.impact->value(), year, *table);
  }
  record.immediacy = immediacy_index(corpus, journal, year);
  record.cited_half_life = cited_half_life(corpus, journal, year);
  record.citing_half_life = citing_half_life(corpus, journal, year);
  return record;
}

std::vector<ImpactRecord> impact_table(const Corpus& corpus, YearWindow years, const NormalizationTable* table,
                                       std::size_t threads) {
  const std::size_t journal_count = corpus.journals().size();
  std::vector<std::vector<ImpactRecord>> per_journal(journal_count);
  parallel_for(journal_count, threads, [&](std::size_t j) {
    for (int y = years.first; y <= years.last; ++y) {
      auto record = impact_record(corpus, static_cast<JournalIndex>(j), y, table);
      if (record.any_defined()) per_journal[j].push_back(std::move(record));
    }
  });
  std::vector<ImpactRecord> out;
  for (auto& records : per_journal)
    for (auto& r : records) out.push_back(std::move(r));
  return out;
}

void write_impact_csv(const Corpus& corpus, const std::vector<ImpactRecord>& records,
                      const std::filesystem::path& path) {
  csv::Writer w({"journal_id", "year", "impact", "normalized_impact", "immediacy", "cited_half_life",
                 "citing_half_life"});
  for (const auto& r : records) {
    w.cell(corpus.journal(r.journal).id).cell(r.year);
    w.cell(r.impact ? std::optional<double>(r.impact->value()) : std::nullopt);
    w.cell(r.normalized_impact).cell(r.immediacy).cell(r.cited_half_life).cell(r.citing_half_life);
    w.end_row();
  }
  w.save(path);
}

ImpactLookup read_impact_csv(const std::filesystem::path& path) {
  auto table = csv::Table::read(path);
  const auto id = table.require_column("journal_id");
  const auto year = table.require_column("year");
  const auto impact = table.require_column("impact");
  const auto normalized = table.require_column("normalized_impact");
  auto number = [&](const std::string& s, std::size_t r, const char* field) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw Error(fmt::format("{}:{}: field '{}': expected number", table.source(), table.line(r), field));
    }
  };
  ImpactLookup lookup;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto& row = table.row(r);
    const auto y = number(row[year], r, "year");
    if (!y) throw Error(fmt::format("{}:{}: field 'year': empty", table.source(), table.line(r)));
    lookup[{row[id], static_cast<int>(*y)}] = {number(row[impact], r, "impact"),
                                              number(row[normalized], r, "normalized_impact")};
  }
  return lookup;
}

void write_market_share_csv(const Corpus& corpus, YearWindow years, const std::filesystem::path& path) {
  csv::Writer w({"publisher_id", "year", "market_share"});
  for (int y = years.first; y <= years.last; ++y) {
    for (PublisherIndex p = 0; p < corpus.publishers().size(); ++p) {
      auto share = market_share(corpus, p, y);
      if (!share || *share == 0.0) continue;
      w.cell(corpus.publisher(p).id).cell(y).cell(*share);
      w.end_row();
    }
  }
  w.save(path);
}

}  // namespace citenet
