#pragma once

// Test-only fixture generators and brute-force oracles. Nothing here calls
// the implementation path it is used to check.

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "andbench/corpus.hpp"
#include "andbench/name.hpp"
#include "andbench/sources.hpp"
#include "andbench/xml_reader.hpp"

namespace andbench::testing {

inline std::string data_path(const std::string& name) {
  return std::string(ANDBENCH_TEST_DATA_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// Random name and partition generators

inline const std::vector<std::string>& forename_pool() {
  static const std::vector<std::string> pool = {
      "Mark", "Mike", "Jake", "John", "Jane", "Jinseok", "Wei", "Bin", "Ana", "Émile",
      "Édouard", "Zoë", "Jin-Seok", "M.", "E.", "J.", "W.", "A", "Björn", "Łukasz"};
  return pool;
}

inline const std::vector<std::string>& surname_pool() {
  static const std::vector<std::string> pool = {"Newman", "Smith", "Kim", "Wang", "Liu",
                                                "Müller", "Muller", "García", "Lee", "Ng"};
  return pool;
}

inline std::string random_name(std::mt19937& rng, bool allow_suffix = true) {
  std::uniform_int_distribution<int> n_fore(0, 3);
  std::uniform_int_distribution<std::size_t> fore(0, forename_pool().size() - 1);
  std::uniform_int_distribution<std::size_t> sur(0, surname_pool().size() - 1);
  std::string name;
  int k = n_fore(rng);
  for (int i = 0; i < k; ++i) name += forename_pool()[fore(rng)] + " ";
  name += surname_pool()[sur(rng)];
  if (allow_suffix && std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
    char buf[8];
    std::snprintf(buf, sizeof buf, " %04d", std::uniform_int_distribution<int>(1, 30)(rng));
    name += buf;
  }
  return name;
}

/// Labels in [0, k) for n items.
inline std::vector<int> random_partition(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> kdist(1, static_cast<int>(std::max<std::size_t>(1, n)));
  int k = kdist(rng);
  // Bias towards few clusters half the time so pair sets are non-trivial.
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) k = std::max(1, k / 8);
  std::uniform_int_distribution<int> pick(0, k - 1);
  std::vector<int> labels(n);
  for (auto& l : labels) l = pick(rng);
  return labels;
}

// ---------------------------------------------------------------------------
// Pair-materializing metric oracles

struct OraclePairCounts {
  std::uint64_t predicted = 0, truth = 0, intersection = 0;
};

/// Enumerates all n(n-1)/2 pairs and counts set memberships directly.
inline OraclePairCounts brute_force_pairs(const std::vector<int>& predicted,
                                          const std::vector<int>& truth) {
  std::set<std::pair<std::size_t, std::size_t>> pred_pairs, truth_pairs;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    for (std::size_t j = i + 1; j < predicted.size(); ++j) {
      if (predicted[i] == predicted[j]) pred_pairs.insert({i, j});
      if (truth[i] == truth[j]) truth_pairs.insert({i, j});
    }
  }
  OraclePairCounts c;
  c.predicted = pred_pairs.size();
  c.truth = truth_pairs.size();
  for (const auto& p : pred_pairs) c.intersection += truth_pairs.count(p);
  return c;
}

struct OracleBCubed {
  double precision = 0, recall = 0, f1 = 0;
};

/// Per-item B-Cubed by explicit cluster-set intersection.
inline OracleBCubed brute_force_bcubed(const std::vector<int>& predicted,
                                       const std::vector<int>& truth) {
  const std::size_t n = predicted.size();
  double p = 0, r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::size_t> c, t;
    for (std::size_t j = 0; j < n; ++j) {
      if (predicted[j] == predicted[i]) c.insert(j);
      if (truth[j] == truth[i]) t.insert(j);
    }
    std::vector<std::size_t> both;
    std::set_intersection(c.begin(), c.end(), t.begin(), t.end(), std::back_inserter(both));
    p += static_cast<double>(both.size()) / static_cast<double>(c.size());
    r += static_cast<double>(both.size()) / static_cast<double>(t.size());
  }
  OracleBCubed out;
  out.precision = p / static_cast<double>(n);
  out.recall = r / static_cast<double>(n);
  out.f1 = 2 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

// ---------------------------------------------------------------------------
// Whole-document reference parse of a DBLP dump using expat

struct ReferenceParse {
  std::vector<PublicationRecord> records;
  std::map<std::string, std::uint64_t> dropped;
  std::uint64_t read = 0;
};

class ExpatReference {
 public:
  explicit ExpatReference(const EntityTable& entities, std::set<std::string> kept)
      : entities_(entities), kept_(std::move(kept)) {}

  ReferenceParse parse(const std::string& document) {
    XML_Parser parser = XML_ParserCreate("UTF-8");
    XML_SetUserData(parser, this);
    XML_SetElementHandler(parser, &ExpatReference::on_start, &ExpatReference::on_end);
    XML_SetCharacterDataHandler(parser, &ExpatReference::on_text);
    XML_SetSkippedEntityHandler(parser, &ExpatReference::on_skipped);
    if (XML_Parse(parser, document.data(), static_cast<int>(document.size()), 1) == XML_STATUS_ERROR) {
      std::string msg = XML_ErrorString(XML_GetErrorCode(parser));
      XML_ParserFree(parser);
      throw std::runtime_error("expat: " + msg);
    }
    XML_ParserFree(parser);
    return std::move(result_);
  }

 private:
  static std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  static void on_start(void* self_ptr, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<ExpatReference*>(self_ptr);
    ++self->depth_;
    if (self->depth_ == 2) {
      ++self->result_.read;
      self->kind_ = name;
      self->current_ = PublicationRecord{};
      self->current_.element = name;
      self->current_.pub_type = pub_type_for_element(name);
      for (int i = 0; attrs[i]; i += 2) {
        if (std::string(attrs[i]) == "key") self->current_.key = attrs[i + 1];
      }
    } else if (self->depth_ == 3) {
      self->field_ = name;
      self->text_.clear();
    }
  }

  static void on_end(void* self_ptr, const XML_Char*) {
    auto* self = static_cast<ExpatReference*>(self_ptr);
    if (self->depth_ == 3) {
      auto& r = self->current_;
      std::string t = trim(self->text_);
      if (self->field_ == "author" && !t.empty()) r.authors.push_back(t);
      if (self->field_ == "title" && r.title.empty()) r.title = t;
      if (self->field_ == "year" && !r.year) {
        if (!t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
          r.year = std::stoi(t);
        }
      }
      if ((self->field_ == "journal" || self->field_ == "booktitle") && !r.venue) r.venue = t;
    } else if (self->depth_ == 2) {
      if (self->kept_.count(self->kind_)) {
        self->result_.records.push_back(std::move(self->current_));
      } else {
        ++self->result_.dropped[self->kind_];
      }
    }
    --self->depth_;
  }

  static void on_text(void* self_ptr, const XML_Char* s, int len) {
    auto* self = static_cast<ExpatReference*>(self_ptr);
    if (self->depth_ >= 3) self->text_.append(s, static_cast<std::size_t>(len));
  }

  static void on_skipped(void* self_ptr, const XML_Char* name, int is_param) {
    auto* self = static_cast<ExpatReference*>(self_ptr);
    if (is_param) return;
    const auto* value = self->entities_.find(name);
    if (value == nullptr) throw std::runtime_error(std::string("undeclared entity ") + name);
    if (self->depth_ >= 3) self->text_ += *value;
  }

  EntityTable entities_;
  std::set<std::string> kept_;
  ReferenceParse result_;
  int depth_ = 0;
  std::string kind_, field_, text_;
  PublicationRecord current_;
};

/// A DBLP-shaped XML document with `n` random records and matching kinds,
/// inline markup, entities and raw UTF-8.
inline std::string random_dblp_document(std::mt19937& rng, std::size_t n) {
  static const std::vector<std::string> kinds = {"article", "inproceedings", "article",
                                                 "inproceedings", "book", "phdthesis",
                                                 "proceedings", "www", "incollection"};
  static const std::vector<std::string> title_bits = {
      "On", "<i>graphs</i>", "&amp;", "name", "disambiguation", "H<sub>2</sub>O", "M&uuml;ller's",
      "&#x3B1;-tests", "&lt;XML&gt;", "García", "<![CDATA[raw <b>]]>", "survey"};
  std::uniform_int_distribution<std::size_t> kind(0, kinds.size() - 1);
  std::uniform_int_distribution<std::size_t> bit(0, title_bits.size() - 1);
  std::uniform_int_distribution<int> n_auth(0, 6), n_bits(1, 6), year(1960, 2017), coin(0, 3);
  std::ostringstream doc;
  doc << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!DOCTYPE dblp SYSTEM \"dblp.dtd\">\n<dblp>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& k = kinds[kind(rng)];
    doc << "<" << k << " mdate=\"2017-08-29\" key=\"" << (k == "www" ? "homepages/" : "x/")
        << i << "\">\n";
    int authors = n_auth(rng);
    for (int a = 0; a < authors; ++a) {
      std::string name = random_name(rng);
      // Occasionally spell a Latin-1 character as an entity.
      auto at = name.find("ü");
      if (at != std::string::npos && coin(rng) == 0) name.replace(at, std::string("ü").size(), "&uuml;");
      doc << "<author>" << name << "</author>\n";
    }
    if (coin(rng) != 0) {
      doc << "<title>";
      int bits = n_bits(rng);
      for (int b = 0; b < bits; ++b) doc << (b ? " " : "") << title_bits[bit(rng)];
      doc << ".</title>\n";
    }
    if (coin(rng) != 0) doc << "<year>" << year(rng) << "</year>\n";
    if (coin(rng) == 0) doc << "<ee>https://doi.org/10.1/" << i << "</ee>\n";
    if (k == "article") doc << "<journal>J. " << i % 7 << "</journal>\n";
    if (k == "inproceedings") doc << "<booktitle>Conf " << i % 5 << "</booktitle>\n";
    doc << "</" << k << ">\n";
  }
  doc << "</dblp>\n";
  return doc.str();
}

// ---------------------------------------------------------------------------
// Self-citation fixture and exhaustive oracle

struct SelfCiteFixture {
  CorpusStore corpus;
  CitationGraph graph;
  std::size_t planted_unique = 0;
  std::size_t planted_excluded = 0;
  std::size_t duplicate_lines = 0;
};

/// 100 papers with ASCII names drawn from a small pool (so accidental key
/// collisions are common), plus planted unique matches, planted two-match
/// exclusions, and repeated edges.
inline SelfCiteFixture self_citation_fixture(std::mt19937& rng) {
  static const std::vector<std::string> fore = {"John", "Jane", "J.", "Mark", "M.", "Wei", "W.", "Ana"};
  static const std::vector<std::string> sur = {"Smith", "Wang", "Kim", "Lee", "Newman"};
  std::uniform_int_distribution<std::size_t> f(0, fore.size() - 1), s(0, sur.size() - 1);
  std::uniform_int_distribution<int> n_auth(1, 4);
  std::vector<std::vector<std::string>> authors(100);
  for (auto& list : authors) {
    int n = n_auth(rng);
    for (int i = 0; i < n; ++i) list.push_back(fore[f(rng)] + " " + sur[s(rng)]);
  }
  SelfCiteFixture fx;
  std::ostringstream edges;
  std::vector<std::pair<int, int>> all_edges;
  // Planted unique matches: p(2i) cites p(2i+1), sharing one distinctive key.
  for (int i = 0; i < 20; ++i) {
    std::string surname = "Planted" + std::string(1, static_cast<char>('a' + i));
    authors[static_cast<std::size_t>(2 * i)].push_back("John " + surname);
    authors[static_cast<std::size_t>(2 * i + 1)].push_back("J. " + surname + " 0001");
    all_edges.emplace_back(2 * i, 2 * i + 1);
    ++fx.planted_unique;
  }
  // Planted exclusions: the cited paper carries two names with the same key.
  for (int i = 0; i < 15; ++i) {
    std::string surname = "Twin" + std::string(1, static_cast<char>('a' + i));
    int p = 40 + 2 * i, q = 41 + 2 * i;
    authors[static_cast<std::size_t>(p)].push_back("J. " + surname);
    authors[static_cast<std::size_t>(q)].push_back("John " + surname);
    authors[static_cast<std::size_t>(q)].push_back("Jane " + surname);
    all_edges.emplace_back(p, q);
    ++fx.planted_excluded;
  }
  std::uniform_int_distribution<int> paper(0, 99);
  std::set<std::pair<int, int>> seen(all_edges.begin(), all_edges.end());
  while (all_edges.size() < 200) {
    int a = paper(rng), b = paper(rng);
    if (a != b && seen.insert({a, b}).second) all_edges.emplace_back(a, b);
  }
  // An edge to a paper outside the corpus.
  edges << "p0\tmissing/1\n";
  for (auto [a, b] : all_edges) edges << "p" << a << "\tp" << b << "\n";
  for (int i = 0; i < 12; ++i) {
    auto [a, b] = all_edges[static_cast<std::size_t>(i * 5)];
    edges << "p" << a << "\tp" << b << "\n";
    ++fx.duplicate_lines;
  }
  CorpusStore::Builder builder;
  for (std::size_t i = 0; i < authors.size(); ++i) {
    builder.add({.key = "p" + std::to_string(i), .element = "article",
                 .pub_type = PubType::journal_article, .title = "Paper " + std::to_string(i),
                 .authors = authors[i]});
  }
  fx.corpus = std::move(builder).build();
  std::istringstream in(edges.str());
  fx.graph = load_citation_graph(in, CitationFormat::edge_list);
  return fx;
}

/// Lowercased first letter of the first forename + "|" + lowercased
/// surname, ignoring a trailing four-digit token. ASCII names only.
inline std::string ascii_first_initial_key(const std::string& raw) {
  std::vector<std::string> tokens;
  std::istringstream in(raw);
  for (std::string t; in >> t;) tokens.push_back(t);
  if (tokens.size() >= 2 && tokens.back().size() == 4 &&
      std::all_of(tokens.back().begin(), tokens.back().end(), ::isdigit)) {
    tokens.pop_back();
  }
  std::string key;
  if (tokens.size() >= 2) key.push_back(static_cast<char>(std::tolower(tokens.front()[0])));
  key.push_back('|');
  for (char c : tokens.back()) key.push_back(static_cast<char>(std::tolower(c)));
  return key;
}

/// Every (citing mention, cited mention) combination of every resolvable
/// edge, kept when the keys agree and neither side has a second mention
/// with that key.
inline std::set<std::pair<MentionId, MentionId>> self_citation_oracle(const CorpusStore& corpus,
                                                                     const CitationGraph& graph) {
  std::set<std::pair<MentionId, MentionId>> out;
  for (const auto& [citing, cited] : graph.edges) {
    auto p = corpus.find_record(citing), q = corpus.find_record(cited);
    if (!p || !q || *p == *q) continue;
    auto on_p = corpus.record_mentions(*p), on_q = corpus.record_mentions(*q);
    for (auto a : on_p) {
      for (auto b : on_q) {
        auto ka = ascii_first_initial_key(corpus.mention(a).raw_name);
        if (ka != ascii_first_initial_key(corpus.mention(b).raw_name)) continue;
        std::size_t same_p = 0, same_q = 0;
        for (auto x : on_p) same_p += ascii_first_initial_key(corpus.mention(x).raw_name) == ka;
        for (auto y : on_q) same_q += ascii_first_initial_key(corpus.mention(y).raw_name) == ka;
        if (same_p == 1 && same_q == 1) out.insert({std::min(a, b), std::max(a, b)});
      }
    }
  }
  return out;
}

inline CitationGraph reversed(const CitationGraph& graph) {
  CitationGraph r = graph;
  r.edges.clear();
  for (const auto& [a, b] : graph.edges) r.edges.emplace(b, a);
  return r;
}

}  // namespace andbench::testing
