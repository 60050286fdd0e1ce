#pragma once

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "citenet/corpus.hpp"
#include "citenet/issn.hpp"

namespace fixture {

using citenet::Corpus;
using citenet::CorpusBuilder;

/// Hand-built corpora: journals and papers declared one line at a time.
class Tiny {
 public:
  explicit Tiny(citenet::YearWindow range = {1990, 2030}) : builder_(range) {}

  Tiny& journal(std::string id, std::string publisher = {}, std::vector<std::string> categories = {"10"},
                bool questionable = false) {
    citenet::Journal j;
    j.id = std::move(id);
    j.publisher_id = std::move(publisher);
    j.categories = std::move(categories);
    j.questionable = questionable;
    builder_.add_journal(std::move(j));
    return *this;
  }

  Tiny& paper(std::string id, std::string journal, int year, std::vector<std::string> references = {},
              std::vector<std::string> authors = {}) {
    citenet::Paper p;
    p.id = std::move(id);
    p.journal_id = std::move(journal);
    p.year = year;
    p.references = std::move(references);
    p.author_keys = std::move(authors);
    builder_.add_paper(std::move(p));
    return *this;
  }

  Tiny& author(std::string key, std::string name) {
    builder_.add_author_name(std::move(key), std::move(name));
    return *this;
  }

  Corpus build() { return std::move(builder_).build(); }

 private:
  CorpusBuilder builder_;
};

inline std::string valid_issn(std::uint32_t n) {
  const auto digits = fmt::format("{:07d}", n % 10000000);
  return fmt::format("{}-{}{}", digits.substr(0, 4), digits.substr(4), citenet::issn_check_character(digits));
}

struct RandomOptions {
  int journals = 8;
  int publishers = 3;
  int categories = 2;
  int first_year = 2010;
  int last_year = 2014;
  int min_papers = 3;  // per journal and year
  int max_papers = 6;
  int max_references = 6;
  int max_authors = 4;
  int author_keys = 60;
  int author_names = 25;  // fewer names than keys, so name blocks hold several people
  int questionable_every = 3;
};

/// Random but reproducible corpus. References point at distinct earlier or
/// same-year papers; journals get valid ISSNs; author names collide.
inline Corpus random_corpus(const RandomOptions& o, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  CorpusBuilder b({o.first_year - 5, o.last_year + 5});
  for (int k = 0; k < o.publishers; ++k) b.add_publisher(fmt::format("P{}", k));
  for (int j = 0; j < o.journals; ++j) {
    citenet::Journal journal;
    journal.id = fmt::format("J{}", j);
    journal.issns = {valid_issn(1000 + 37 * static_cast<std::uint32_t>(j))};
    journal.publisher_id = fmt::format("P{}", j % o.publishers);
    journal.categories = {fmt::format("{}", 10 + j % o.categories)};
    if (j % 5 == 4) journal.categories.push_back(fmt::format("{}", 10 + (j + 1) % o.categories));
    std::sort(journal.categories.begin(), journal.categories.end());
    journal.categories.erase(std::unique(journal.categories.begin(), journal.categories.end()),
                             journal.categories.end());
    journal.questionable = o.questionable_every > 0 && j % o.questionable_every == 0;
    b.add_journal(std::move(journal));
  }
  for (int a = 0; a < o.author_keys; ++a)
    b.add_author_name(fmt::format("A{}", a), fmt::format("Name{}, {}.", a % o.author_names, char('A' + a % 3)));

  std::vector<std::string> earlier;
  int serial = 0;
  for (int y = o.first_year; y <= o.last_year; ++y) {
    std::vector<std::string> this_year;
    for (int j = 0; j < o.journals; ++j) {
      const int count = uniform(o.min_papers, o.max_papers);
      for (int n = 0; n < count; ++n) {
        citenet::Paper p;
        p.id = fmt::format("W{}", serial++);
        p.journal_id = fmt::format("J{}", j);
        p.year = y;
        std::set<int> keys;
        const int authors = uniform(1, o.max_authors);
        while (static_cast<int>(keys.size()) < authors) keys.insert(uniform(0, o.author_keys - 1));
        for (int k : keys) p.author_keys.push_back(fmt::format("A{}", k));
        const auto pool = earlier.size() + this_year.size();
        const int refs = std::min<int>(uniform(0, o.max_references), static_cast<int>(pool));
        std::set<std::size_t> picks;
        while (static_cast<int>(picks.size()) < refs)
          picks.insert(std::uniform_int_distribution<std::size_t>(0, pool - 1)(rng));
        for (auto k : picks) p.references.push_back(k < earlier.size() ? earlier[k] : this_year[k - earlier.size()]);
        this_year.push_back(p.id);
        b.add_paper(std::move(p));
      }
    }
    earlier.insert(earlier.end(), this_year.begin(), this_year.end());
  }
  return std::move(b).build();
}

/// Writes the corpus plus an authors.csv into `dir`.
inline void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  citenet::save_corpus(corpus, dir);
  std::set<std::string> keys;
  for (const auto& p : corpus.papers()) keys.insert(p.author_keys.begin(), p.author_keys.end());
  std::ofstream out(dir / "authors.csv");
  out << "author_key,name\n";
  for (const auto& k : keys) out << k << ",\"" << corpus.author_name(k) << "\"\n";
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / fmt::format("citenet_test_{}", name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixture

#include "citenet/matching.hpp"

namespace fixture {

/// Synthetic matching registry: sizes log-uniform in [10, 2000] (some
/// inactive), impacts on a coarse grid so exact ties occur, 1-2 categories.
inline std::vector<citenet::JournalProfile> random_profiles(std::size_t count, std::uint64_t seed,
                                                            int categories = 6) {
  std::mt19937_64 rng(seed);
  std::vector<citenet::JournalProfile> out;
  for (std::size_t j = 0; j < count; ++j) {
    citenet::JournalProfile p;
    p.journal = static_cast<citenet::JournalIndex>(j);
    p.id = fmt::format("J{:04d}", j);
    p.categories.push_back(fmt::format("{}", 10 + rng() % categories));
    if (rng() % 4 == 0) {
      auto extra = fmt::format("{}", 10 + rng() % categories);
      if (extra != p.categories[0]) p.categories.push_back(extra);
    }
    std::sort(p.categories.begin(), p.categories.end());
    p.questionable = rng() % 6 == 0;
    p.size = static_cast<std::size_t>(std::exp(std::uniform_real_distribution<double>(std::log(10), std::log(2000))(rng)));
    if (rng() % 10) p.impact = double(rng() % 400) / 100.0;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace fixture

namespace fixture {

/// Run configuration over a corpus written by write_corpus, with the slow
/// stages scaled down.
inline nlohmann::json run_config(const std::filesystem::path& corpus_dir, const std::filesystem::path& out,
                                 std::vector<std::string> stages, int matching_year = 2014) {
  nlohmann::json j;
  j["corpus"] = {{"papers", (corpus_dir / "papers.jsonl").string()},
                 {"journals", (corpus_dir / "journals.csv").string()},
                 {"publishers", (corpus_dir / "publishers.csv").string()},
                 {"authors", (corpus_dir / "authors.csv").string()},
                 {"first_year", 2005},
                 {"last_year", 2019}};
  j["output"] = out.string();
  j["seed"] = 42;
  j["stages"] = stages;
  j["impact"] = {{"reference_year", matching_year}, {"market_share", true}};
  j["matching"] = {{"year", matching_year}};
  j["jnet"] = {{"years", {matching_year - 2}}, {"windows", {2}}, {"link_types", {"citation", "reference"}}};
  j["novelty"] = {{"ensemble_count", 4}, {"swaps_per_edge", 3}};
  j["synth"] = {{"component_size_min", 100}, {"component_size_max", 110}};
  j["rewire"] = {{"ensemble_count", 3}, {"checkpoints", {1.0, 2.0}}};
  return j;
}

inline const std::vector<std::string>& all_stages() {
  static const std::vector<std::string> s = {"impact",  "matching",   "selfcite", "jnet",
                                             "novelty", "disruption", "authors",  "synth"};
  return s;
}

/// Options for a corpus where every journal is active in the matching year.
inline RandomOptions active_options() {
  RandomOptions o;
  o.journals = 9;
  o.first_year = 2010;
  o.last_year = 2014;
  o.min_papers = 30;
  o.max_papers = 34;
  o.max_references = 5;
  o.author_keys = 300;
  o.author_names = 120;
  return o;
}

}  // namespace fixture
