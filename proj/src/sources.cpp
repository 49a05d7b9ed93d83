#include "andbench/sources.hpp"

#include <algorithm>
#include <charconv>

#include "andbench/csv.hpp"
#include "andbench/union_find.hpp"
#include "andbench/utf8.hpp"
#include "json.hpp"

namespace andbench {

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

void require_utf8(const csv::LineReader& reader, std::string_view line) {
  if (auto bad = utf8::find_invalid(line)) {
    throw IngestError("invalid UTF-8 sequence on line " + std::to_string(reader.line_number()),
                      reader.line_offset() + *bad);
  }
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Synonyms

SynonymSet SynonymSet::from_pairs(std::span<const NamePair> pairs) {
  SynonymSet set;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<const std::string*> names;
  DisjointSets sets;
  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = index.try_emplace(name, sets.size());
    if (inserted) {
      sets.add();
      names.push_back(&it->first);
    }
    return it->second;
  };
  for (const auto& [a, b] : pairs) {
    if (a == b) continue;
    set.pairs_.insert(a < b ? NamePair{a, b} : NamePair{b, a});
  }
  for (const auto& [a, b] : set.pairs_) sets.unite(id_of(a), id_of(b));

  std::vector<const std::string*> smallest(sets.size(), nullptr);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto r = sets.find(i);
    if (smallest[r] == nullptr || *names[i] < *smallest[r]) smallest[r] = names[i];
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    set.root_.emplace(*names[i], *smallest[sets.find(i)]);
  }
  return set;
}

const std::string& SynonymSet::root(const std::string& name) const {
  auto it = root_.find(name);
  return it == root_.end() ? name : it->second;
}

std::vector<std::vector<std::string>> SynonymSet::partition() const {
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [name, root] : root_) groups[root].push_back(name);
  std::vector<std::vector<std::string>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

SynonymLoad load_synonym_pairs(std::istream& source) {
  SynonymLoad result;
  std::vector<NamePair> pairs;
  csv::LineReader reader(source);
  std::string line;
  while (reader.next(line)) {
    require_utf8(reader, line);
    if (blank(line)) continue;
    auto fields = csv::split_tabs(line);
    if (fields.size() != 2) {
      result.errors.push_back({reader.line_number(), "expected 2 tab-separated fields, got " +
                                                         std::to_string(fields.size())});
      continue;
    }
    auto a = trim(fields[0]);
    auto b = trim(fields[1]);
    if (a.empty() || b.empty()) {
      result.errors.push_back({reader.line_number(), "empty name"});
      continue;
    }
    pairs.emplace_back(std::move(a), std::move(b));
    ++result.pairs_read;
  }
  result.synonyms = SynonymSet::from_pairs(pairs);
  return result;
}

// ---------------------------------------------------------------------------
// ORCID

bool valid_orcid(std::string_view orcid) {
  if (orcid.size() != 19) return false;
  int total = 0;
  int digits = 0;
  for (std::size_t i = 0; i < 19; ++i) {
    char c = orcid[i];
    if (i == 4 || i == 9 || i == 14) {
      if (c != '-') return false;
      continue;
    }
    if (i == 18) break;
    if (c < '0' || c > '9') return false;
    total = (total + (c - '0')) * 2;
    ++digits;
  }
  int result = (12 - total % 11) % 11;
  char expected = result == 10 ? 'X' : static_cast<char>('0' + result);
  return digits == 15 && orcid[18] == expected;
}

std::optional<std::string> orcid_from_url(std::string_view url) {
  constexpr std::string_view marker = "orcid.org/";
  auto at = url.find(marker);
  if (at == std::string_view::npos) return std::nullopt;
  auto id = url.substr(at + marker.size(), 19);
  if (id.size() < 19) return std::nullopt;
  return std::string(id);
}

std::size_t OrcidLinkage::distinct_orcids() const {
  std::set<std::string_view> ids;
  for (const auto& [m, o] : links) ids.insert(o);
  return ids.size();
}

namespace {

// Per-source accumulation of name -> set of ORCIDs.
class NameOrcidMap {
 public:
  void add(const std::string& name, const std::string& orcid) { map_[name].insert(orcid); }

  // Moves unambiguous names into `out`, overriding existing entries, and
  // reports the ambiguous names. Names in conflict are removed from `out`.
  void merge_into(std::map<std::string, std::string>& out,
                  std::map<std::string, std::set<std::string>>& conflicts) const {
    for (const auto& [name, ids] : map_) {
      if (ids.size() == 1) {
        out[name] = *ids.begin();
        conflicts.erase(name);
      } else {
        out.erase(name);
        conflicts[name] = ids;
      }
    }
  }

 private:
  std::map<std::string, std::set<std::string>> map_;
};

}  // namespace

OrcidLinkage load_orcid_links(const CorpusStore& corpus, std::istream* mapping_file,
                              bool use_dump_records) {
  OrcidLinkage linkage;
  std::map<std::string, std::string> name_to_orcid;
  std::map<std::string, std::set<std::string>> conflicts;

  if (use_dump_records) {
    NameOrcidMap dump;
    for (const auto& person : corpus.person_records()) {
      for (const auto& url : person.urls) {
        auto id = orcid_from_url(url);
        if (!id) continue;
        if (!valid_orcid(*id)) {
          ++linkage.rejected_invalid;
          continue;
        }
        for (const auto& name : person.names) dump.add(name, *id);
      }
    }
    for (const auto& attr : corpus.author_orcid_attributes()) {
      std::string id = attr.orcid;
      if (auto from_url = orcid_from_url(id)) id = *from_url;
      if (!valid_orcid(id)) {
        ++linkage.rejected_invalid;
        continue;
      }
      dump.add(attr.name, id);
    }
    dump.merge_into(name_to_orcid, conflicts);
  }

  if (mapping_file != nullptr) {
    NameOrcidMap mapped;
    csv::LineReader reader(*mapping_file);
    std::string line;
    while (reader.next(line)) {
      require_utf8(reader, line);
      if (blank(line)) continue;
      auto fields = csv::split_tabs(line);
      if (fields.size() != 2) {
        linkage.errors.push_back({reader.line_number(), "expected orcid<TAB>name"});
        continue;
      }
      auto id = trim(fields[0]);
      auto name = trim(fields[1]);
      if (auto from_url = orcid_from_url(id)) id = *from_url;
      if (!valid_orcid(id)) {
        ++linkage.rejected_invalid;
        continue;
      }
      if (name.empty()) {
        linkage.errors.push_back({reader.line_number(), "empty name"});
        continue;
      }
      mapped.add(name, id);
    }
    mapped.merge_into(name_to_orcid, conflicts);
  }

  for (auto& [name, ids] : conflicts) {
    linkage.conflicts.push_back({name, std::vector<std::string>(ids.begin(), ids.end())});
  }
  linkage.names_mapped = name_to_orcid.size();
  if (name_to_orcid.empty()) return linkage;
  for (const auto& m : corpus.mentions()) {
    auto it = name_to_orcid.find(m.raw_name);
    if (it != name_to_orcid.end()) linkage.links.emplace(m.id, it->second);
  }
  return linkage;
}

// ---------------------------------------------------------------------------
// Citations

CitationGraph load_citation_graph(std::istream& source, CitationFormat format) {
  CitationGraph graph;
  auto add_edge = [&](std::string citing, std::string cited) {
    ++graph.entries_read;
    if (citing == cited) {
      ++graph.self_loops;
      return;
    }
    if (!graph.edges.emplace(std::move(citing), std::move(cited)).second) ++graph.duplicates;
  };

  csv::LineReader reader(source);
  std::string line;
  while (reader.next(line)) {
    require_utf8(reader, line);
    if (blank(line)) continue;
    if (format == CitationFormat::edge_list) {
      auto fields = csv::split_tabs(line);
      if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
        graph.errors.push_back({reader.line_number(), "expected citing_key<TAB>cited_key"});
        continue;
      }
      add_edge(trim(fields[0]), trim(fields[1]));
      continue;
    }
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      graph.errors.push_back({reader.line_number(), "expected an object with a string \"id\""});
      continue;
    }
    const std::string id = j["id"].get<std::string>();
    if (!j.contains("references")) continue;  // a paper citing nothing
    const auto& refs = j["references"];
    if (!refs.is_array() ||
        !std::all_of(refs.begin(), refs.end(), [](const auto& r) { return r.is_string(); })) {
      graph.errors.push_back({reader.line_number(), "\"references\" must be a string array"});
      continue;
    }
    for (const auto& r : refs) add_edge(id, r.get<std::string>());
  }
  return graph;
}

CitationResolution resolve_citations(const CitationGraph& graph, const CorpusStore& corpus) {
  CitationResolution res;
  std::set<std::string_view> missing;
  for (const auto& [citing, cited] : graph.edges) {
    bool a = corpus.find_record(citing).has_value();
    bool b = corpus.find_record(cited).has_value();
    if (!a) missing.insert(citing);
    if (!b) missing.insert(cited);
    if (a && b) {
      ++res.edges_resolved;
    } else {
      ++res.edges_unresolved;
    }
  }
  res.unresolved_endpoints = missing.size();
  return res;
}

// ---------------------------------------------------------------------------
// Labeled datasets

std::size_t LabeledSourceDataset::distinct_authors() const {
  std::set<std::string_view> ids;
  for (const auto& e : entries) ids.insert(e.truth_author_id);
  return ids.size();
}

LabeledSourceDataset load_labeled_dataset(std::istream& source, LabelOrigin origin) {
  LabeledSourceDataset dataset;
  dataset.origin = origin;
  csv::LineReader reader(source);
  std::string line;
  if (!reader.next(line)) throw IngestError("labeled dataset: missing header", 0);
  require_utf8(reader, line);
  // A UTF-8 byte order mark is tolerated on the header.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  const auto header = csv::split_tabs(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column.emplace(trim(header[i]), i);
  for (const char* required : {"author_id", "name"}) {
    if (!column.count(required)) {
      throw IngestError(std::string("labeled dataset: missing mandatory column '") + required + "'",
                        0);
    }
  }
  auto col = [&](const char* name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  const auto c_id = *col("author_id");
  const auto c_name = *col("name");
  const auto c_title = col("title");
  const auto c_year = col("year");
  const auto c_venue = col("venue");
  const auto c_pos = col("position");

  while (reader.next(line)) {
    require_utf8(reader, line);
    if (blank(line)) continue;
    auto fields = csv::split_tabs(line);
    // Trailing optional columns may be omitted entirely.
    if (fields.size() < std::max(c_id, c_name) + 1 || fields.size() > header.size()) {
      dataset.errors.push_back({reader.line_number(), "unexpected field count " +
                                                          std::to_string(fields.size())});
      continue;
    }
    auto field = [&](std::optional<std::size_t> c) -> std::string {
      if (!c || *c >= fields.size()) return {};
      return trim(fields[*c]);
    };
    LabeledEntry entry;
    entry.truth_author_id = field(c_id);
    entry.raw_name = field(c_name);
    if (entry.truth_author_id.empty() || entry.raw_name.empty()) {
      dataset.errors.push_back({reader.line_number(), "empty author_id or name"});
      continue;
    }
    entry.title = field(c_title);
    entry.year = parse_number<int>(field(c_year));
    if (auto v = field(c_venue); !v.empty()) entry.venue = std::move(v);
    entry.position = parse_number<std::uint32_t>(field(c_pos));
    if (entry.position && *entry.position == 0) entry.position.reset();
    dataset.entries.push_back(std::move(entry));
  }
  return dataset;
}

}  // namespace andbench
