#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "andbench/corpus.hpp"
#include "andbench/error.hpp"

// Loaders for the tabular/JSON side inputs: synonym pairs, ORCID links,
// citation graphs and labeled datasets. All inputs are UTF-8; invalid
// encoding is fatal (IngestError), malformed lines are reported and skipped.

namespace andbench {

using NamePair = std::pair<std::string, std::string>;

/// Name-variant pairs and their transitive consolidation. The representative
/// of each consolidated group is its lexicographically smallest name, so the
/// result does not depend on pair order.
class SynonymSet {
 public:
  SynonymSet() = default;
  static SynonymSet from_pairs(std::span<const NamePair> pairs);

  /// Unordered pairs stored as (min, max); reflexive pairs are dropped.
  const std::set<NamePair>& pairs() const { return pairs_; }

  /// Representative name; names outside every pair are their own root.
  const std::string& root(const std::string& name) const;
  bool connected(const std::string& a, const std::string& b) const {
    return root(a) == root(b);
  }

  /// Groups of ≥2 names, each sorted, groups sorted by first member.
  std::vector<std::vector<std::string>> partition() const;

  bool empty() const { return pairs_.empty(); }

 private:
  std::set<NamePair> pairs_;
  std::unordered_map<std::string, std::string> root_;
};

struct SynonymLoad {
  SynonymSet synonyms;
  std::size_t pairs_read = 0;
  std::vector<LineDiagnostic> errors;
};

/// name_a<TAB>name_b per line. Blank lines are ignored.
SynonymLoad load_synonym_pairs(std::istream& source);

/// ORCID iD format NNNN-NNNN-NNNN-NNNX with a valid ISO 7064 MOD 11-2 check
/// character.
bool valid_orcid(std::string_view orcid);

/// Extracts the identifier following "orcid.org/" in a URL, if any.
std::optional<std::string> orcid_from_url(std::string_view url);

struct OrcidConflict {
  std::string name;
  std::vector<std::string> orcids;  // sorted, ≥2
};

struct OrcidLinkage {
  std::map<MentionId, std::string> links;
  std::size_t names_mapped = 0;
  std::size_t rejected_invalid = 0;
  std::vector<OrcidConflict> conflicts;
  std::vector<LineDiagnostic> errors;

  std::size_t distinct_orcids() const;
};

/// Builds the name -> ORCID map from identifiers embedded in the dump
/// (homepage person records and author `orcid` attributes) and, when given,
/// a mapping file (orcid<TAB>name). Mapping-file entries take precedence per
/// name. A name mapped to two ORCIDs within a source is excluded and
/// reported. Every mention whose exact raw name is mapped is linked.
OrcidLinkage load_orcid_links(const CorpusStore& corpus, std::istream* mapping_file,
                              bool use_dump_records = true);

enum class CitationFormat { edge_list, record_json_lines };

struct CitationGraph {
  std::set<NamePair> edges;  // (citing key, cited key)
  std::size_t entries_read = 0;
  std::size_t duplicates = 0;
  std::size_t self_loops = 0;
  std::vector<LineDiagnostic> errors;
};

CitationGraph load_citation_graph(std::istream& source, CitationFormat format);

struct CitationResolution {
  std::size_t edges_resolved = 0;
  std::size_t edges_unresolved = 0;
  std::size_t unresolved_endpoints = 0;  // distinct keys absent from the corpus
};

CitationResolution resolve_citations(const CitationGraph& graph, const CorpusStore& corpus);

enum class LabelOrigin { manual, external_authority, automatic };

struct LabeledEntry {
  std::string truth_author_id;
  std::string raw_name;
  std::string title;
  std::optional<int> year;
  std::optional<std::string> venue;
  std::optional<std::uint32_t> position;
};

struct LabeledSourceDataset {
  std::vector<LabeledEntry> entries;
  LabelOrigin origin = LabelOrigin::manual;
  std::vector<LineDiagnostic> errors;

  std::size_t distinct_authors() const;
};

/// Tab-separated with a header naming the columns author_id, name, title,
/// year, venue, position (any order; the last four optional). Throws
/// IngestError when author_id or name is missing from the header.
LabeledSourceDataset load_labeled_dataset(std::istream& source,
                                          LabelOrigin origin = LabelOrigin::manual);

}  // namespace andbench
