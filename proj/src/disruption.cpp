#include "citenet/disruption.hpp"

#include <unordered_set>

#include "citenet/csv.hpp"
#include "citenet/parallel.hpp"

namespace citenet {

std::optional<double> DisruptionCounts::index() const {
  const auto total = n_i + n_j + n_k;
  if (total == 0) return std::nullopt;
  return (static_cast<double>(n_i) - static_cast<double>(n_j)) / static_cast<double>(total);
}

DisruptionCounts disruption_counts(const Corpus& corpus, PaperIndex paper, YearWindow citer_years) {
  DisruptionCounts c;
  c.paper = paper;
  std::unordered_set<PaperIndex> citers;
  for (auto q : corpus.citers(paper))
    if (citer_years.contains(corpus.paper(q).year)) citers.insert(q);

  std::unordered_set<PaperIndex> both, only_refs;
  for (auto r : corpus.references(paper))
    for (auto q : corpus.citers(r)) {
      if (q == paper || !citer_years.contains(corpus.paper(q).year)) continue;
      if (citers.count(q))
        both.insert(q);
      else
        only_refs.insert(q);
    }
  c.n_j = both.size();
  c.n_i = citers.size() - both.size();
  c.n_k = only_refs.size();
  return c;
}

std::optional<double> disruptiveness(const Corpus& corpus, PaperIndex paper, YearWindow citer_years) {
  return disruption_counts(corpus, paper, citer_years).index();
}

std::vector<DisruptionRecord> disruption_table(const Corpus& corpus, YearWindow citer_years, std::size_t threads) {
  std::vector<DisruptionRecord> rows(corpus.papers().size());
  parallel_for(rows.size(), threads, [&](std::size_t p) {
    auto& r = rows[p];
    const auto& paper = corpus.paper(static_cast<PaperIndex>(p));
    r.counts = disruption_counts(corpus, static_cast<PaperIndex>(p), citer_years);
    r.d = r.counts.index();
    r.author_count = paper.author_keys.size();
    r.year = paper.year;
    r.journal = paper.journal;
  });
  return rows;
}

namespace {

template <class Key>
GroupMeans group_means(std::span<const DisruptionRecord> records, Key key) {
  GroupMeans g;
  std::map<long long, double> sums;
  for (const auto& r : records) {
    const auto k = key(r);
    if (!k) continue;
    if (!r.d) {
      ++g.undefined;
      continue;
    }
    sums[*k] += *r.d;
    ++g.count[*k];
  }
  for (const auto& [k, s] : sums) g.mean[k] = s / static_cast<double>(g.count[k]);
  return g;
}

}  // namespace

GroupMeans disruptiveness_by_team_size(std::span<const DisruptionRecord> records) {
  return group_means(records, [](const DisruptionRecord& r) { return std::optional<long long>(r.author_count); });
}

GroupMeans disruptiveness_by_year(std::span<const DisruptionRecord> records) {
  return group_means(records, [](const DisruptionRecord& r) { return std::optional<long long>(r.year); });
}

GroupMeans disruptiveness_by_journal(std::span<const DisruptionRecord> records) {
  return group_means(records, [](const DisruptionRecord& r) {
    return r.journal == kNoIndex ? std::nullopt : std::optional<long long>(r.journal);
  });
}

void write_disruption_csv(const Corpus& corpus, std::span<const DisruptionRecord> rows,
                          const std::filesystem::path& path) {
  csv::Writer w({"paper_id", "n_i", "n_j", "n_k", "D", "author_count", "year"});
  for (const auto& r : rows) {
    w.cell(corpus.paper(r.counts.paper).id).cell(r.counts.n_i).cell(r.counts.n_j).cell(r.counts.n_k);
    w.cell(r.d).cell(r.author_count).cell(r.year);
    w.end_row();
  }
  w.save(path);
}

}  // namespace citenet
