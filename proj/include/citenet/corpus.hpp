#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citenet/types.hpp"

namespace citenet {

struct Paper {
  std::string id;
  std::string journal_id;
  JournalIndex journal = kNoIndex;  // kNoIndex when journal_id is unknown
  int year = 0;
  std::vector<std::string> author_keys;
  std::vector<std::string> references;  // raw ids as loaded
};

struct Journal {
  std::string id;
  std::vector<std::string> issns;
  std::string publisher_id;
  PublisherIndex publisher = kNoIndex;
  std::vector<std::string> categories;  // 2-digit ASJC codes
  bool questionable = false;
  std::map<int, std::size_t> paper_count_by_year;

  std::size_t paper_count(int year) const;
  std::size_t paper_count(YearWindow window) const;
};

struct Publisher {
  std::string id;
  std::vector<JournalIndex> journals;
  bool declared = false;  // listed in publishers.csv
};

struct DanglingReference {
  std::string citing_id;
  std::string missing_id;
};

struct LoadReport {
  std::vector<DanglingReference> dangling;
  std::vector<std::string> unknown_journal_papers;
};

/// Immutable bibliographic store. Citation edges exist between resolved
/// papers only; self references and repeated references are kept in the raw
/// Paper record but never become edges.
class Corpus {
 public:
  const std::vector<Paper>& papers() const { return papers_; }
  const std::vector<Journal>& journals() const { return journals_; }
  const std::vector<Publisher>& publishers() const { return publishers_; }
  const Paper& paper(PaperIndex p) const { return papers_[p]; }
  const Journal& journal(JournalIndex j) const { return journals_[j]; }
  const Publisher& publisher(PublisherIndex p) const { return publishers_[p]; }

  std::span<const PaperIndex> references(PaperIndex p) const {
    return {ref_targets_.data() + ref_offsets_[p], ref_targets_.data() + ref_offsets_[p + 1]};
  }
  std::span<const PaperIndex> citers(PaperIndex p) const {
    return {cite_sources_.data() + cite_offsets_[p], cite_sources_.data() + cite_offsets_[p + 1]};
  }
  std::span<const PaperIndex> journal_papers(JournalIndex j) const {
    return {journal_papers_.data() + journal_offsets_[j],
            journal_papers_.data() + journal_offsets_[j + 1]};
  }
  std::size_t edge_count() const { return ref_targets_.size(); }

  std::optional<PaperIndex> find_paper(std::string_view id) const;
  std::optional<JournalIndex> find_journal(std::string_view id) const;
  std::optional<PublisherIndex> find_publisher(std::string_view id) const;

  /// Display name of an author record; the key itself when no name is known.
  const std::string& author_name(const std::string& key) const;
  bool has_author_names() const { return !author_names_.empty(); }
  const std::unordered_map<std::string, std::string>& author_names() const { return author_names_; }

  YearWindow year_range() const { return year_range_; }
  const LoadReport& load_report() const { return report_; }

 private:
  friend class CorpusBuilder;

  std::vector<Paper> papers_;
  std::vector<Journal> journals_;
  std::vector<Publisher> publishers_;
  std::unordered_map<std::string, PaperIndex> paper_lookup_;
  std::unordered_map<std::string, JournalIndex> journal_lookup_;
  std::unordered_map<std::string, PublisherIndex> publisher_lookup_;
  std::unordered_map<std::string, std::string> author_names_;
  std::vector<std::size_t> ref_offsets_, cite_offsets_, journal_offsets_;
  std::vector<PaperIndex> ref_targets_, cite_sources_, journal_papers_;
  YearWindow year_range_{1996, 2018};
  LoadReport report_;
};

/// Accumulates records and produces an indexed Corpus.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(YearWindow year_range = {1996, 2018});

  /// Registers a publisher declared in a publisher list.
  PublisherIndex add_publisher(std::string id);
  /// Throws Error on a duplicate journal id. A publisher_id not yet seen is
  /// registered as undeclared.
  JournalIndex add_journal(Journal journal);
  /// Throws Error on a duplicate paper id.
  PaperIndex add_paper(Paper paper);
  void add_author_name(std::string key, std::string name);

  std::size_t paper_count() const { return corpus_.papers_.size(); }

  Corpus build() &&;

 private:
  Corpus corpus_;
};

struct CorpusPaths {
  std::filesystem::path papers;      // papers.jsonl
  std::filesystem::path journals;    // journals.csv
  std::filesystem::path publishers;  // publishers.csv, optional
  std::filesystem::path authors;     // authors.csv (author_key,name), optional
};

inline constexpr std::string_view kJsonlCsvFormat = "jsonl-csv";

/// Loads papers as JSON lines and journals/publishers as CSV. Malformed
/// records raise Error naming file, line and field.
Corpus load_corpus(const CorpusPaths& paths, std::string_view format = kJsonlCsvFormat,
                   YearWindow year_range = {1996, 2018});

/// Writes a corpus back to the interchange files in `dir`.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Deterministic text form of the forward and inverted citation indices.
std::string serialize_index(const Corpus& corpus);

struct Violation {
  std::string kind;
  std::string subject;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool clean() const { return violations.empty(); }
  std::size_t count(std::string_view kind) const;
};

ValidationReport validate_corpus(const Corpus& corpus);

}  // namespace citenet
