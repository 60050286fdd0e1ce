#include "citenet/authors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "citenet/csv.hpp"
#include "citenet/parallel.hpp"

namespace citenet {

namespace {

// ASCII base letters for U+00C0..U+017F; '?' keeps the code point.
constexpr std::string_view kLatin1 = "AAAAAAACEEEEIIIIDNOOOOO?OUUUUYTsaaaaaaaceeeeiiiidnooooo?ouuuuyty";
constexpr std::string_view kLatinExtA =
    "AaAaAaCcCcCcCcDdDdEeEeEeEeEeGgGgGgGgHhHhIiIiIiIiIiIiJjKkkLlLlLlLlLlNnNnNnnNnOoOoOoOoRrRrRrSsSsSsSsTtTtTtUuUuUuUuUuUuWwYyYZzZzZzs";

std::string fold(std::string_view in) {
  std::string out;
  for (std::size_t i = 0; i < in.size();) {
    const auto c = static_cast<unsigned char>(in[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3 : (c >> 3) == 30 ? 4 : 1;
    if (i + len > in.size()) len = 1;
    if (len == 1) {
      out.push_back(static_cast<char>(std::tolower(c)));
      ++i;
      continue;
    }
    char32_t cp = len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (std::size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(in[i + k]) & 0x3F);
    char base = '?';
    if (cp >= 0xC0 && cp < 0x100) base = kLatin1[cp - 0xC0];
    if (cp >= 0x100 && cp < 0x180) base = kLatinExtA[cp - 0x100];
    if (cp >= 0x300 && cp < 0x370) base = 0;  // combining mark
    if (base == '?')
      out.append(in.substr(i, len));
    else if (base)
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(base))));
    i += len;
  }
  return out;
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '.' || c == '\n') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t sorted_overlap(std::vector<PaperIndex> a, std::vector<PaperIndex> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<PaperIndex> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.size();
}

bool cites(const Corpus& corpus, PaperIndex from, PaperIndex to) {
  const auto refs = corpus.references(from);
  return std::find(refs.begin(), refs.end(), to) != refs.end();
}

std::set<std::string> paper_names(const Corpus& corpus, PaperIndex p) {
  std::set<std::string> names;
  for (const auto& key : corpus.paper(p).author_keys) names.insert(normalize_author_name(corpus.author_name(key)));
  return names;
}

}  // namespace

void SimilarityWeights::validate() const {
  if (w_self_citation < 0 || w_shared_author < 0 || w_shared_citation < 0 || w_shared_reference < 0)
    throw Error("similarity weights must be nonnegative");
  if (!(pair_threshold > 0) || !(group_threshold > 0)) throw Error("similarity thresholds must be positive");
}

std::string normalize_author_name(std::string_view name) {
  const std::string folded = fold(name);
  std::vector<std::string> surname, given;
  if (auto comma = folded.find(','); comma != std::string::npos) {
    surname = tokens(std::string_view(folded).substr(0, comma));
    given = tokens(std::string_view(folded).substr(comma + 1));
  } else {
    auto all = tokens(folded);
    if (!all.empty()) {
      surname.push_back(all.back());
      all.pop_back();
    }
    given = std::move(all);
  }
  std::string out;
  for (const auto& s : surname) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  if (!given.empty()) {
    out += ", ";
    for (const auto& g : given) out.push_back(g.front());
  }
  return out;
}

double paper_similarity(const Corpus& corpus, PaperIndex p1, PaperIndex p2, const SimilarityWeights& weights,
                        std::string_view block_name) {
  const double self = (cites(corpus, p1, p2) || cites(corpus, p2, p1)) ? 1.0 : 0.0;
  const auto n1 = paper_names(corpus, p1);
  const auto n2 = paper_names(corpus, p2);
  std::size_t shared_authors = 0;
  for (const auto& n : n1)
    if (n2.count(n) && n != block_name) ++shared_authors;
  const auto c1 = corpus.citers(p1), c2 = corpus.citers(p2);
  const auto r1 = corpus.references(p1), r2 = corpus.references(p2);
  const auto shared_citers = sorted_overlap({c1.begin(), c1.end()}, {c2.begin(), c2.end()});
  const auto shared_refs = sorted_overlap({r1.begin(), r1.end()}, {r2.begin(), r2.end()});
  return weights.w_self_citation * self + weights.w_shared_author * static_cast<double>(shared_authors) +
         weights.w_shared_citation * static_cast<double>(shared_citers) +
         weights.w_shared_reference * static_cast<double>(shared_refs);
}

std::vector<std::vector<std::size_t>> cluster_block(std::span<const double> similarity, std::size_t m,
                                                    double pair_threshold, double group_threshold) {
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (similarity[a * m + b] > pair_threshold) {
        auto ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }

  // Groups ordered by smallest member; members ascending.
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::size_t, std::size_t> group_of_root;
  for (std::size_t a = 0; a < m; ++a) {
    auto [it, fresh] = group_of_root.emplace(find(a), groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(a);
  }

  const std::size_t g = groups.size();
  std::vector<double> sum(g * g, 0.0);
  for (std::size_t x = 0; x < g; ++x)
    for (std::size_t y = x + 1; y < g; ++y) {
      double s = 0.0;
      for (auto a : groups[x])
        for (auto b : groups[y]) s += similarity[a * m + b];
      sum[x * g + y] = sum[y * g + x] = s;
    }
  std::vector<char> alive(g, 1);
  while (true) {
    double best = group_threshold;
    std::size_t bx = g, by = g;
    for (std::size_t x = 0; x < g; ++x) {
      if (!alive[x]) continue;
      for (std::size_t y = x + 1; y < g; ++y) {
        if (!alive[y]) continue;
        const double avg = sum[x * g + y] / static_cast<double>(groups[x].size() * groups[y].size());
        if (avg > best) {
          best = avg;
          bx = x;
          by = y;
        }
      }
    }
    if (bx == g) break;
    groups[bx].insert(groups[bx].end(), groups[by].begin(), groups[by].end());
    std::sort(groups[bx].begin(), groups[bx].end());
    groups[by].clear();
    alive[by] = 0;
    for (std::size_t z = 0; z < g; ++z) {
      if (!alive[z] || z == bx) continue;
      sum[bx * g + z] = sum[z * g + bx] = sum[bx * g + z] + sum[by * g + z];
    }
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t x = 0; x < g; ++x)
    if (alive[x]) out.push_back(std::move(groups[x]));
  return out;
}

AuthorClusters disambiguate(const Corpus& corpus, const SimilarityWeights& weights, std::size_t threads) {
  weights.validate();
  std::map<std::string, std::vector<Mention>> blocks;
  for (PaperIndex p = 0; p < corpus.papers().size(); ++p) {
    std::set<std::string> seen;
    for (const auto& key : corpus.paper(p).author_keys)
      if (seen.insert(key).second) blocks[normalize_author_name(corpus.author_name(key))].push_back({key, p});
  }
  std::vector<const std::pair<const std::string, std::vector<Mention>>*> order;
  for (const auto& entry : blocks) order.push_back(&entry);

  std::vector<std::vector<std::vector<std::size_t>>> block_groups(order.size());
  parallel_for(order.size(), threads, [&](std::size_t b) {
    const auto& [name, mentions] = *order[b];
    const std::size_t m = mentions.size();
    std::vector<double> sim(m * m, 0.0);
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t y = x + 1; y < m; ++y)
        if (mentions[x].paper != mentions[y].paper)
          sim[x * m + y] = sim[y * m + x] =
              paper_similarity(corpus, mentions[x].paper, mentions[y].paper, weights, name);
    block_groups[b] = cluster_block(sim, m, weights.pair_threshold, weights.group_threshold);
  });

  AuthorClusters result;
  for (std::size_t b = 0; b < order.size(); ++b) {
    const auto& [name, mentions] = *order[b];
    for (const auto& group : block_groups[b]) {
      if (group.size() == 1) {
        const auto& mention = mentions[group.front()];
        const auto& paper = corpus.paper(mention.paper);
        if (paper.author_keys.size() == 1 && corpus.citers(mention.paper).empty()) {
          result.excluded.push_back(mention);
          continue;
        }
      }
      std::vector<Mention> cluster;
      for (auto i : group) cluster.push_back(mentions[i]);
      result.clusters.push_back(std::move(cluster));
      result.block.push_back(name);
    }
  }
  return result;
}

std::vector<AuthorStats> author_demographics(const Corpus& corpus, const AuthorClusters& clusters,
                                             bool questionable_group) {
  std::vector<JournalIndex> group;
  for (JournalIndex j = 0; j < corpus.journals().size(); ++j)
    if (corpus.journal(j).questionable == questionable_group) group.push_back(j);
  return author_demographics(corpus, clusters, group);
}

std::vector<AuthorStats> author_demographics(const Corpus& corpus, const AuthorClusters& clusters,
                                             std::span<const JournalIndex> group) {
  std::vector<char> member(corpus.journals().size(), 0);
  for (auto j : group) member[j] = 1;
  auto in_group = [&](PaperIndex p) {
    const auto j = corpus.paper(p).journal;
    return j != kNoIndex && member[j];
  };
  std::vector<AuthorStats> out;
  for (std::size_t c = 0; c < clusters.clusters.size(); ++c) {
    std::set<PaperIndex> own;
    for (const auto& m : clusters.clusters[c]) own.insert(m.paper);
    if (std::none_of(own.begin(), own.end(), in_group)) continue;

    AuthorStats s;
    s.cluster_id = c;
    s.paper_count = own.size();
    int first = std::numeric_limits<int>::max(), last = std::numeric_limits<int>::min();
    std::size_t cited = 0, citing = 0;
    for (auto p : own) {
      first = std::min(first, corpus.paper(p).year);
      last = std::max(last, corpus.paper(p).year);
      const bool group_paper = in_group(p);
      if (group_paper) ++s.group_paper_count;
      const auto refs = corpus.references(p);
      const auto citers = corpus.citers(p);
      const bool self_citing = std::any_of(refs.begin(), refs.end(), [&](auto r) { return own.count(r) > 0; });
      const bool self_cited = std::any_of(citers.begin(), citers.end(), [&](auto q) { return own.count(q) > 0; });
      citing += self_citing;
      cited += self_cited;
      if (std::any_of(refs.begin(), refs.end(), in_group)) ++s.group_self_citing;
      if (std::any_of(citers.begin(), citers.end(), in_group)) ++s.group_self_cited;
      if (group_paper && self_citing) ++s.group_own_self_citing;
      if (group_paper && self_cited) ++s.group_own_self_cited;
    }
    s.academic_age = last - first;
    s.self_cited_fraction = static_cast<double>(cited) / static_cast<double>(s.paper_count);
    s.self_citing_fraction = static_cast<double>(citing) / static_cast<double>(s.paper_count);
    out.push_back(s);
  }
  return out;
}

void write_clusters_csv(const Corpus& corpus, const AuthorClusters& clusters, const std::filesystem::path& path) {
  csv::Writer w({"cluster_id", "author_key", "paper_id"});
  for (std::size_t c = 0; c < clusters.clusters.size(); ++c)
    for (const auto& m : clusters.clusters[c]) {
      w.cell(c).cell(m.author_key).cell(corpus.paper(m.paper).id);
      w.end_row();
    }
  w.save(path);
}

void write_author_stats_csv(std::span<const AuthorStats> questionable, std::span<const AuthorStats> unquestioned,
                            const std::filesystem::path& path) {
  csv::Writer w({"group", "cluster_id", "academic_age", "paper_count", "group_paper_count", "self_cited_fraction",
                 "self_citing_fraction", "group_self_cited", "group_self_citing", "group_own_self_cited",
                 "group_own_self_citing"});
  auto emit = [&](std::string_view group, std::span<const AuthorStats> rows) {
    for (const auto& s : rows) {
      w.cell(group).cell(s.cluster_id).cell(s.academic_age).cell(s.paper_count).cell(s.group_paper_count);
      w.cell(s.self_cited_fraction).cell(s.self_citing_fraction).cell(s.group_self_cited).cell(s.group_self_citing);
      w.cell(s.group_own_self_cited).cell(s.group_own_self_citing);
      w.end_row();
    }
  };
  emit("QJ", questionable);
  emit("UJ", unquestioned);
  w.save(path);
}

}  // namespace citenet
