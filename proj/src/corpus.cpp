#include "citenet/corpus.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "citenet/csv.hpp"
#include "citenet/issn.hpp"

namespace citenet {

std::size_t Journal::paper_count(int year) const {
  auto it = paper_count_by_year.find(year);
  return it == paper_count_by_year.end() ? 0 : it->second;
}

std::size_t Journal::paper_count(YearWindow window) const {
  std::size_t total = 0;
  for (const auto& [year, count] : paper_count_by_year)
    if (window.contains(year)) total += count;
  return total;
}

std::optional<PaperIndex> Corpus::find_paper(std::string_view id) const {
  auto it = paper_lookup_.find(std::string(id));
  if (it == paper_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<JournalIndex> Corpus::find_journal(std::string_view id) const {
  auto it = journal_lookup_.find(std::string(id));
  if (it == journal_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<PublisherIndex> Corpus::find_publisher(std::string_view id) const {
  auto it = publisher_lookup_.find(std::string(id));
  if (it == publisher_lookup_.end()) return std::nullopt;
  return it->second;
}

const std::string& Corpus::author_name(const std::string& key) const {
  auto it = author_names_.find(key);
  return it == author_names_.end() ? key : it->second;
}

CorpusBuilder::CorpusBuilder(YearWindow year_range) { corpus_.year_range_ = year_range; }

PublisherIndex CorpusBuilder::add_publisher(std::string id) {
  if (auto existing = corpus_.find_publisher(id)) {
    corpus_.publishers_[*existing].declared = true;
    return *existing;
  }
  const auto index = static_cast<PublisherIndex>(corpus_.publishers_.size());
  corpus_.publisher_lookup_.emplace(id, index);
  corpus_.publishers_.push_back(Publisher{std::move(id), {}, true});
  return index;
}

JournalIndex CorpusBuilder::add_journal(Journal journal) {
  if (corpus_.journal_lookup_.contains(journal.id))
    throw Error(fmt::format("duplicate journal_id '{}'", journal.id));
  const auto index = static_cast<JournalIndex>(corpus_.journals_.size());
  journal.publisher = kNoIndex;
  journal.paper_count_by_year.clear();
  if (!journal.publisher_id.empty()) {
    auto existing = corpus_.find_publisher(journal.publisher_id);
    PublisherIndex p;
    if (existing) {
      p = *existing;
    } else {
      p = static_cast<PublisherIndex>(corpus_.publishers_.size());
      corpus_.publisher_lookup_.emplace(journal.publisher_id, p);
      corpus_.publishers_.push_back(Publisher{journal.publisher_id, {}, false});
    }
    corpus_.publishers_[p].journals.push_back(index);
    journal.publisher = p;
  }
  corpus_.journal_lookup_.emplace(journal.id, index);
  corpus_.journals_.push_back(std::move(journal));
  return index;
}

PaperIndex CorpusBuilder::add_paper(Paper paper) {
  const auto index = static_cast<PaperIndex>(corpus_.papers_.size());
  if (!corpus_.paper_lookup_.emplace(paper.id, index).second)
    throw Error(fmt::format("duplicate paper_id '{}'", paper.id));
  corpus_.papers_.push_back(std::move(paper));
  return index;
}

void CorpusBuilder::add_author_name(std::string key, std::string name) {
  corpus_.author_names_[std::move(key)] = std::move(name);
}

Corpus CorpusBuilder::build() && {
  Corpus& c = corpus_;
  const std::size_t n = c.papers_.size();
  const std::size_t journal_count = c.journals_.size();

  std::vector<std::size_t> journal_sizes(journal_count, 0);
  for (auto& paper : c.papers_) {
    auto j = c.find_journal(paper.journal_id);
    if (!j) {
      paper.journal = kNoIndex;
      c.report_.unknown_journal_papers.push_back(paper.id);
      continue;
    }
    paper.journal = *j;
    ++c.journals_[*j].paper_count_by_year[paper.year];
    ++journal_sizes[*j];
  }

  c.journal_offsets_.assign(journal_count + 1, 0);
  for (std::size_t j = 0; j < journal_count; ++j)
    c.journal_offsets_[j + 1] = c.journal_offsets_[j] + journal_sizes[j];
  c.journal_papers_.assign(c.journal_offsets_.back(), 0);
  {
    auto cursor = c.journal_offsets_;
    for (PaperIndex p = 0; p < n; ++p) {
      const auto j = c.papers_[p].journal;
      if (j != kNoIndex) c.journal_papers_[cursor[j]++] = p;
    }
  }

  c.ref_offsets_.assign(n + 1, 0);
  std::vector<std::size_t> in_degree(n, 0);
  c.ref_targets_.clear();
  std::vector<PaperIndex> resolved;
  for (PaperIndex p = 0; p < n; ++p) {
    resolved.clear();
    for (const auto& ref : c.papers_[p].references) {
      auto target = c.find_paper(ref);
      if (!target) {
        c.report_.dangling.push_back({c.papers_[p].id, ref});
        continue;
      }
      if (*target == p) continue;
      if (std::find(resolved.begin(), resolved.end(), *target) != resolved.end()) continue;
      resolved.push_back(*target);
    }
    for (auto t : resolved) {
      c.ref_targets_.push_back(t);
      ++in_degree[t];
    }
    c.ref_offsets_[p + 1] = c.ref_targets_.size();
  }

  c.cite_offsets_.assign(n + 1, 0);
  for (std::size_t p = 0; p < n; ++p) c.cite_offsets_[p + 1] = c.cite_offsets_[p] + in_degree[p];
  c.cite_sources_.assign(c.ref_targets_.size(), 0);
  {
    auto cursor = c.cite_offsets_;
    for (PaperIndex p = 0; p < n; ++p)
      for (auto t : c.references(p)) c.cite_sources_[cursor[t]++] = p;
  }
  return std::move(c);
}

namespace {

std::string required_string(const nlohmann::json& record, const char* field, const std::string& where) {
  auto it = record.find(field);
  if (it == record.end()) throw Error(fmt::format("{}: field '{}': missing", where, field));
  if (!it->is_string()) throw Error(fmt::format("{}: field '{}': expected string", where, field));
  return it->get<std::string>();
}

std::vector<std::string> string_list(const nlohmann::json& record, const char* field,
                                     const std::string& where, bool required) {
  auto it = record.find(field);
  if (it == record.end()) {
    if (required) throw Error(fmt::format("{}: field '{}': missing", where, field));
    return {};
  }
  if (!it->is_array()) throw Error(fmt::format("{}: field '{}': expected array", where, field));
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& item : *it) {
    if (!item.is_string())
      throw Error(fmt::format("{}: field '{}': expected array of strings", where, field));
    out.push_back(item.get<std::string>());
  }
  return out;
}

bool parse_flag(const std::string& text, const std::string& where) {
  if (text == "1" || text == "true" || text == "True" || text == "TRUE") return true;
  if (text == "0" || text == "false" || text == "False" || text == "FALSE" || text.empty()) return false;
  throw Error(fmt::format("{}: field 'questionable_flag': expected 0/1/true/false, got '{}'", where, text));
}

void load_papers(const std::filesystem::path& path, CorpusBuilder& builder) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("{}: cannot open file", path.string()));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = fmt::format("{}:{}", path.string(), line_no);
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(fmt::format("{}: invalid JSON: {}", where, e.what()));
    }
    if (!record.is_object()) throw Error(fmt::format("{}: expected a JSON object", where));
    Paper paper;
    paper.id = required_string(record, "paper_id", where);
    paper.journal_id = required_string(record, "journal_id", where);
    auto year = record.find("year");
    if (year == record.end()) throw Error(fmt::format("{}: field 'year': missing", where));
    if (!year->is_number_integer()) throw Error(fmt::format("{}: field 'year': expected integer", where));
    paper.year = year->get<int>();
    paper.author_keys = string_list(record, "author_keys", where, false);
    paper.references = string_list(record, "references", where, false);
    try {
      builder.add_paper(std::move(paper));
    } catch (const Error& e) {
      throw Error(fmt::format("{}: field 'paper_id': {}", where, e.what()));
    }
  }
}

}  // namespace

Corpus load_corpus(const CorpusPaths& paths, std::string_view format, YearWindow year_range) {
  if (format != kJsonlCsvFormat) throw Error(fmt::format("unsupported corpus format '{}'", format));
  CorpusBuilder builder(year_range);

  if (!paths.publishers.empty()) {
    auto table = csv::Table::read(paths.publishers);
    const auto id = table.require_column("publisher_id");
    for (std::size_t r = 0; r < table.rows(); ++r) {
      if (table.row(r)[id].empty())
        throw Error(fmt::format("{}:{}: field 'publisher_id': empty", table.source(), table.line(r)));
      builder.add_publisher(table.row(r)[id]);
    }
  }

  {
    auto table = csv::Table::read(paths.journals);
    const auto id = table.require_column("journal_id");
    const auto issns = table.require_column("issns");
    const auto publisher = table.require_column("publisher_id");
    const auto categories = table.require_column("categories");
    const auto flag = table.require_column("questionable_flag");
    for (std::size_t r = 0; r < table.rows(); ++r) {
      const auto& row = table.row(r);
      const std::string where = fmt::format("{}:{}", table.source(), table.line(r));
      if (row[id].empty()) throw Error(fmt::format("{}: field 'journal_id': empty", where));
      Journal journal;
      journal.id = row[id];
      journal.issns = csv::split(row[issns], ';');
      journal.publisher_id = row[publisher];
      journal.categories = csv::split(row[categories], ';');
      journal.questionable = parse_flag(row[flag], where);
      try {
        builder.add_journal(std::move(journal));
      } catch (const Error& e) {
        throw Error(fmt::format("{}: field 'journal_id': {}", where, e.what()));
      }
    }
  }

  if (!paths.authors.empty()) {
    auto table = csv::Table::read(paths.authors);
    const auto key = table.require_column("author_key");
    const auto name = table.require_column("name");
    for (std::size_t r = 0; r < table.rows(); ++r) builder.add_author_name(table.row(r)[key], table.row(r)[name]);
  }

  load_papers(paths.papers, builder);
  return std::move(builder).build();
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "papers.jsonl", std::ios::binary);
    if (!out) throw Error(fmt::format("{}: cannot write file", (dir / "papers.jsonl").string()));
    for (const auto& p : corpus.papers()) {
      nlohmann::ordered_json record;
      record["paper_id"] = p.id;
      record["journal_id"] = p.journal_id;
      record["year"] = p.year;
      record["author_keys"] = p.author_keys;
      record["references"] = p.references;
      out << record.dump() << '\n';
    }
  }
  {
    csv::Writer w({"journal_id", "issns", "publisher_id", "categories", "questionable_flag"});
    for (const auto& j : corpus.journals()) {
      std::string issns, categories;
      for (const auto& s : j.issns) issns += (issns.empty() ? "" : ";") + s;
      for (const auto& s : j.categories) categories += (categories.empty() ? "" : ";") + s;
      w.cell(j.id).cell(issns).cell(j.publisher_id).cell(categories).cell(j.questionable ? 1 : 0);
      w.end_row();
    }
    w.save(dir / "journals.csv");
  }
  {
    csv::Writer w({"publisher_id"});
    for (const auto& p : corpus.publishers()) {
      w.cell(p.id);
      w.end_row();
    }
    w.save(dir / "publishers.csv");
  }
}

std::string serialize_index(const Corpus& corpus) {
  std::string out = "# forward\n";
  const auto n = static_cast<PaperIndex>(corpus.papers().size());
  for (PaperIndex p = 0; p < n; ++p) {
    out += corpus.paper(p).id;
    out += '\t';
    bool first = true;
    for (auto t : corpus.references(p)) {
      if (!first) out += ',';
      out += corpus.paper(t).id;
      first = false;
    }
    out += '\n';
  }
  out += "# inverted\n";
  for (PaperIndex p = 0; p < n; ++p) {
    out += corpus.paper(p).id;
    out += '\t';
    bool first = true;
    for (auto s : corpus.citers(p)) {
      if (!first) out += ',';
      out += corpus.paper(s).id;
      first = false;
    }
    out += '\n';
  }
  out += "# dangling\n";
  for (const auto& d : corpus.load_report().dangling) out += d.citing_id + '\t' + d.missing_id + '\n';
  return out;
}

std::size_t ValidationReport::count(std::string_view kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string subject, std::string message) {
    report.violations.push_back({std::move(kind), std::move(subject), std::move(message)});
  };

  const bool publishers_declared = std::any_of(corpus.publishers().begin(), corpus.publishers().end(),
                                               [](const Publisher& p) { return p.declared; });

  std::vector<std::map<int, std::size_t>> counted(corpus.journals().size());
  for (const auto& paper : corpus.papers())
    if (paper.journal != kNoIndex) ++counted[paper.journal][paper.year];

  for (JournalIndex j = 0; j < corpus.journals().size(); ++j) {
    const auto& journal = corpus.journal(j);
    for (const auto& issn : journal.issns)
      if (!validate_issn(issn))
        add("issn_checksum", journal.id, fmt::format("journal '{}' has invalid ISSN '{}'", journal.id, issn));
    if (journal.categories.empty())
      add("empty_categories", journal.id, fmt::format("journal '{}' has no categories", journal.id));
    if (journal.paper_count_by_year != counted[j])
      add("paper_count", journal.id, fmt::format("journal '{}' paper counts disagree with papers", journal.id));
    if (journal.publisher != kNoIndex) {
      const auto& publisher = corpus.publisher(journal.publisher);
      if (publishers_declared && !publisher.declared)
        add("unknown_publisher", journal.id,
            fmt::format("journal '{}' names undeclared publisher '{}'", journal.id, publisher.id));
      if (std::find(publisher.journals.begin(), publisher.journals.end(), j) == publisher.journals.end())
        add("publisher_backref", journal.id,
            fmt::format("publisher '{}' does not list journal '{}'", publisher.id, journal.id));
    }
  }

  for (PublisherIndex p = 0; p < corpus.publishers().size(); ++p) {
    const auto& publisher = corpus.publisher(p);
    if (publisher.journals.empty())
      add("empty_publisher", publisher.id, fmt::format("publisher '{}' has no journals", publisher.id));
    for (auto j : publisher.journals)
      if (corpus.journal(j).publisher != p)
        add("publisher_backref", publisher.id,
            fmt::format("journal '{}' does not point back to publisher '{}'", corpus.journal(j).id, publisher.id));
  }

  const auto range = corpus.year_range();
  for (const auto& paper : corpus.papers()) {
    if (!range.contains(paper.year))
      add("year_out_of_range", paper.id,
          fmt::format("paper '{}' year {} outside [{}, {}]", paper.id, paper.year, range.first, range.last));
    std::unordered_set<std::string> seen;
    bool self_reported = false;
    for (const auto& ref : paper.references) {
      if (ref == paper.id && !self_reported) {
        add("self_reference", paper.id, fmt::format("paper '{}' cites itself", paper.id));
        self_reported = true;
      }
      if (!seen.insert(ref).second)
        add("duplicate_reference", paper.id, fmt::format("paper '{}' lists reference '{}' twice", paper.id, ref));
    }
  }
  return report;
}

}  // namespace citenet
