#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "andbench/name.hpp"
#include "andbench/xml_reader.hpp"

namespace andbench {

enum class PubType { journal_article, conference_paper, other };

std::string_view to_string(PubType type);

/// article -> journal_article, inproceedings -> conference_paper, else other.
PubType pub_type_for_element(std::string_view element);

struct PublicationRecord {
  std::string key;
  std::string element;  // DBLP element kind, e.g. "inproceedings"
  PubType pub_type = PubType::other;
  std::optional<int> year;
  std::string title;
  std::optional<std::string> venue;
  std::vector<std::string> authors;  // source order; index + 1 = position

  bool operator==(const PublicationRecord&) const = default;
};

/// A DBLP person ("www", homepages/...) record. Not part of the kept
/// publication records; retained for ORCID discovery.
struct PersonRecord {
  std::string key;
  std::vector<std::string> names;
  std::vector<std::string> urls;

  bool operator==(const PersonRecord&) const = default;
};

/// An `orcid` attribute found on an author element of a kept record.
struct AuthorOrcidAttribute {
  std::string name;
  std::string orcid;

  bool operator==(const AuthorOrcidAttribute&) const = default;
};

struct IngestStats {
  std::uint64_t records_read = 0;
  std::uint64_t records_kept = 0;
  std::map<std::string, std::uint64_t> dropped_by_type;
  std::uint64_t unknown_kinds = 0;      // subset of dropped, kinds not in DBLP's schema
  std::uint64_t duplicate_keys = 0;     // subset of dropped
  std::uint64_t empty_author_names = 0;
  std::uint64_t bytes_read = 0;

  std::uint64_t records_dropped() const;
  bool operator==(const IngestStats&) const = default;
};

struct IngestFilter {
  std::set<std::string> kept_kinds{"article", "inproceedings"};
};

/// Immutable store of kept publication records and their author mentions.
/// Mention ids are dense: mention(id).id == id.
class CorpusStore {
 public:
  class Builder;

  CorpusStore() = default;

  std::span<const PublicationRecord> records() const { return records_; }
  std::span<const AuthorMention> mentions() const { return mentions_; }
  std::span<const PersonRecord> person_records() const { return persons_; }
  std::span<const AuthorOrcidAttribute> author_orcid_attributes() const { return author_orcids_; }
  const IngestStats& stats() const { return stats_; }

  const AuthorMention& mention(MentionId id) const { return mentions_.at(id); }
  const PublicationRecord& record_of(const AuthorMention& m) const { return records_.at(m.record); }
  std::optional<std::uint32_t> find_record(std::string_view key) const;

  /// Mention ids of a record, in author order.
  std::span<const MentionId> record_mentions(std::uint32_t record) const;

  /// Mention id for (record, 1-based position), if present.
  std::optional<MentionId> mention_at(std::uint32_t record, std::uint32_t position) const;

 private:
  std::vector<PublicationRecord> records_;
  std::vector<AuthorMention> mentions_;
  std::vector<std::vector<MentionId>> record_mentions_;
  std::vector<PersonRecord> persons_;
  std::vector<AuthorOrcidAttribute> author_orcids_;
  std::unordered_map<std::string, std::uint32_t> key_index_;
  IngestStats stats_;
};

/// Accumulates records and produces a CorpusStore. Used by the XML ingester
/// and by tests that build synthetic corpora.
class CorpusStore::Builder {
 public:
  /// Returns false (and counts a duplicate) if the key is already present.
  bool add(PublicationRecord record);
  void add_person(PersonRecord person);
  void add_author_orcid(AuthorOrcidAttribute attr);
  IngestStats& stats() { return store_.stats_; }
  CorpusStore build() &&;

 private:
  CorpusStore store_;
};

struct IngestProgress {
  /// Called every `interval` records read, with the running stats.
  std::uint64_t interval = 0;
  std::function<void(const IngestStats&)> callback;
};

/// Streams a DBLP XML dump. Throws IngestError on malformed XML, invalid
/// UTF-8 or undeclared entities.
CorpusStore ingest_dblp(std::istream& source, const IngestFilter& filter = {},
                        const EntityTable& entities = EntityTable::latin1(),
                        const IngestProgress& progress = {});

/// Canonical JSON-lines serialization (one record per line, then persons,
/// then a stats line). Deterministic for a given store.
void write_corpus_jsonl(const CorpusStore& store, std::ostream& out);

/// mention_id,record_key,position,raw_name
void write_mentions_csv(const CorpusStore& store, std::ostream& out);

}  // namespace andbench
