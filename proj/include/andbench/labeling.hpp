#pragma once

#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "andbench/blocking.hpp"
#include "andbench/corpus.hpp"
#include "andbench/sources.hpp"

namespace andbench {

struct MatchStats {
  std::size_t entries_in = 0;
  std::size_t entries_matched = 0;
  std::size_t entries_unmatched = 0;
  std::size_t ambiguous_count = 0;
  /// Unmatched entries whose unique candidate was already claimed by an
  /// entry with a different author id.
  std::size_t conflicts = 0;

  double match_ratio() const {
    return entries_in == 0 ? 0.0
                           : static_cast<double>(entries_matched) / static_cast<double>(entries_in);
  }
  bool operator==(const MatchStats&) const = default;
};

/// Truth assignment mention -> author id.
struct MatchedLabels {
  std::map<MentionId, std::string> truth;
  std::string source_tag;
  MatchStats match_stats;

  std::size_t distinct_authors() const;
  std::vector<MentionId> mention_ids() const;
  const std::string* truth_of(MentionId id) const {
    auto it = truth.find(id);
    return it == truth.end() ? nullptr : &it->second;
  }
};

/// How a candidate record agrees with a labeled entry. Optional fields are
/// absent when either side lacks the value.
struct FieldAgreement {
  bool title = true;
  std::optional<bool> year;
  std::optional<bool> venue;
  std::optional<bool> position;
  bool full_name = false;  // forenames equal, not only initial-compatible

  int agreeing_fields() const;
};

struct MatchCandidate {
  std::string record_key;
  MentionId mention = 0;
  std::uint32_t position = 0;
  FieldAgreement agreement;
};

struct AmbiguityItem {
  std::size_t entry_index = 0;
  LabeledEntry entry;
  std::vector<MatchCandidate> candidates;  // ≥2
};

struct AmbiguityReport {
  std::vector<AmbiguityItem> items;
};

struct MatchOptions {
  /// Resolve ambiguous entries to the candidate with the most agreeing
  /// fields. Ties stay ambiguous.
  bool auto_resolve = false;
};

struct MatchResult {
  MatchedLabels labels;
  AmbiguityReport ambiguity;
};

/// Candidates agree on normalized title, on year and venue when both sides
/// have them, and carry a compatible author (at the entry's position when
/// given). Exactly one candidate labels that mention.
MatchResult match_labeled_records(const LabeledSourceDataset& dataset, const CorpusStore& corpus,
                                  std::string source_tag, const MatchOptions& options = {});

MatchedLabels build_orcid_labels(const CorpusStore& corpus, const OrcidLinkage& links);

/// When two labeled mentions in a block count as "matching names".
enum class NameMatchRule { display_string, block_key };

struct SubsetOptions {
  NameMatchRule rule = NameMatchRule::display_string;
  /// Synonym subset: keep only authors with ≥2 distinct name strings.
  bool synonym_only = true;
};

/// Labeled mentions whose name matches another labeled mention's name, in
/// blocks holding ≥2 distinct authors. `blocks` must be first-initial
/// blocks over the labeled mentions.
MatchedLabels extract_orcid_homonym_subset(const MatchedLabels& labels, const CorpusStore& corpus,
                                           const BlockIndex& blocks, const SubsetOptions& options = {});

/// Labeled mentions whose name matches no other labeled mention's name, in
/// blocks holding exactly one author.
MatchedLabels extract_orcid_synonym_subset(const MatchedLabels& labels, const CorpusStore& corpus,
                                           const BlockIndex& blocks, const SubsetOptions& options = {});

struct MentionPair {
  MentionId a = 0;  // a < b
  MentionId b = 0;
  auto operator<=>(const MentionPair&) const = default;
};

struct PairLabels {
  std::vector<MentionPair> pairs;  // sorted, unique
  std::string source_tag;
  std::size_t edges_used = 0;
  std::size_t edges_unresolved = 0;

  std::vector<MentionId> mention_ids() const;
};

/// For each resolved citation edge, pairs a citing-paper mention with a
/// cited-paper mention when they are the only mentions on their papers with
/// that first-initial+surname key.
PairLabels extract_self_citation_pairs(const CorpusStore& corpus, const CitationGraph& graph);

/// mention_id,truth_author_id,source_tag
void write_labels_csv(const MatchedLabels& labels, std::ostream& out);
/// mention_id_a,mention_id_b
void write_pairs_csv(const PairLabels& pairs, std::ostream& out);
/// One JSON object per ambiguous entry.
void write_ambiguity_jsonl(const AmbiguityReport& report, std::ostream& out);

}  // namespace andbench
