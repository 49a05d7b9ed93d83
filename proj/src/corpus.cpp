#include "andbench/corpus.hpp"

#include <algorithm>
#include <charconv>
#include "json.hpp"

#include "andbench/csv.hpp"
#include "andbench/error.hpp"

namespace andbench {

namespace {

const std::set<std::string, std::less<>> kDblpKinds = {
    "article", "inproceedings", "proceedings", "book",   "incollection",
    "phdthesis", "mastersthesis", "www",        "person", "data"};

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<int> parse_year(std::string_view text) {
  std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return value;
}

// Concatenated character data of the current element and its descendants.
// Consumes events up to and including the element's end tag.
std::string collect_text(XmlReader& reader, XmlEvent& event) {
  std::string text;
  std::size_t depth = 1;
  while (depth > 0 && reader.next(event)) {
    switch (event.kind) {
      case XmlEvent::Kind::start_element:
        ++depth;
        break;
      case XmlEvent::Kind::end_element:
        --depth;
        break;
      case XmlEvent::Kind::text:
        text += event.text;
        break;
      case XmlEvent::Kind::end_of_document:
        return text;
    }
  }
  return text;
}

void skip_element(XmlReader& reader, XmlEvent& event) { collect_text(reader, event); }

}  // namespace

std::string_view to_string(PubType type) {
  switch (type) {
    case PubType::journal_article:
      return "journal_article";
    case PubType::conference_paper:
      return "conference_paper";
    case PubType::other:
      return "other";
  }
  return "other";
}

PubType pub_type_for_element(std::string_view element) {
  if (element == "article") return PubType::journal_article;
  if (element == "inproceedings") return PubType::conference_paper;
  return PubType::other;
}

std::uint64_t IngestStats::records_dropped() const {
  std::uint64_t total = 0;
  for (const auto& [kind, n] : dropped_by_type) total += n;
  return total;
}

std::optional<std::uint32_t> CorpusStore::find_record(std::string_view key) const {
  auto it = key_index_.find(std::string(key));
  if (it == key_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const MentionId> CorpusStore::record_mentions(std::uint32_t record) const {
  return record_mentions_.at(record);
}

std::optional<MentionId> CorpusStore::mention_at(std::uint32_t record,
                                                 std::uint32_t position) const {
  const auto& ids = record_mentions_.at(record);
  if (position == 0 || position > ids.size()) return std::nullopt;
  return ids[position - 1];
}

bool CorpusStore::Builder::add(PublicationRecord record) {
  auto index = static_cast<std::uint32_t>(store_.records_.size());
  if (!store_.key_index_.try_emplace(record.key, index).second) {
    ++store_.stats_.duplicate_keys;
    ++store_.stats_.dropped_by_type["duplicate_key"];
    return false;
  }
  auto& ids = store_.record_mentions_.emplace_back();
  for (std::size_t i = 0; i < record.authors.size(); ++i) {
    auto id = static_cast<MentionId>(store_.mentions_.size());
    store_.mentions_.push_back(
        AuthorMention{id, index, static_cast<std::uint32_t>(i + 1), record.authors[i]});
    ids.push_back(id);
  }
  store_.records_.push_back(std::move(record));
  ++store_.stats_.records_kept;
  return true;
}

void CorpusStore::Builder::add_person(PersonRecord person) {
  store_.persons_.push_back(std::move(person));
}

void CorpusStore::Builder::add_author_orcid(AuthorOrcidAttribute attr) {
  store_.author_orcids_.push_back(std::move(attr));
}

CorpusStore CorpusStore::Builder::build() && { return std::move(store_); }

CorpusStore ingest_dblp(std::istream& source, const IngestFilter& filter,
                        const EntityTable& entities, const IngestProgress& progress) {
  XmlReader reader(source, entities);
  CorpusStore::Builder builder;
  XmlEvent event;

  // Root element.
  do {
    if (!reader.next(event)) throw IngestError("malformed XML: no root element", reader.offset());
  } while (event.kind != XmlEvent::Kind::start_element);

  while (reader.next(event)) {
    if (event.kind == XmlEvent::Kind::end_element || event.kind == XmlEvent::Kind::end_of_document) {
      continue;
    }
    if (event.kind != XmlEvent::Kind::start_element) continue;

    auto& stats = builder.stats();
    ++stats.records_read;
    const std::string kind = event.name;
    const bool known = kDblpKinds.count(kind) > 0;
    const bool keep = filter.kept_kinds.count(kind) > 0;
    const bool person = kind == "www";

    if (!keep && !person) {
      if (!known) ++stats.unknown_kinds;
      ++stats.dropped_by_type[kind];
      skip_element(reader, event);
    } else {
      PublicationRecord record;
      record.element = kind;
      record.pub_type = pub_type_for_element(kind);
      if (const auto* key = event.attribute("key")) record.key = *key;
      std::vector<std::string> urls;
      std::vector<AuthorOrcidAttribute> orcids;

      while (reader.next(event) && event.kind != XmlEvent::Kind::end_element) {
        if (event.kind != XmlEvent::Kind::start_element) continue;
        const std::string field = event.name;
        std::optional<std::string> orcid_attr;
        if (const auto* o = event.attribute("orcid")) orcid_attr = *o;
        std::string text = collect_text(reader, event);
        if (field == "author") {
          std::string name = trim(text);
          if (name.empty()) {
            ++stats.empty_author_names;
            continue;
          }
          if (orcid_attr) orcids.push_back({name, trim(*orcid_attr)});
          record.authors.push_back(std::move(name));
        } else if (field == "title") {
          if (record.title.empty()) record.title = trim(text);
        } else if (field == "year") {
          if (!record.year) record.year = parse_year(text);
        } else if (field == "journal" || field == "booktitle") {
          if (!record.venue) record.venue = trim(text);
        } else if (field == "url") {
          urls.push_back(trim(text));
        }
      }

      if (person) {
        if (!keep) ++stats.dropped_by_type[kind];
        if (record.key.rfind("homepages/", 0) == 0) {
          builder.add_person(PersonRecord{record.key, record.authors, std::move(urls)});
        }
      }
      if (keep) {
        std::vector<AuthorOrcidAttribute> pending = std::move(orcids);
        if (builder.add(std::move(record))) {
          for (auto& o : pending) builder.add_author_orcid(std::move(o));
        }
      }
    }
    if (progress.interval && progress.callback && stats.records_read % progress.interval == 0) {
      stats.bytes_read = reader.offset();
      progress.callback(stats);
    }
  }
  builder.stats().bytes_read = reader.offset();
  return std::move(builder).build();
}

void write_corpus_jsonl(const CorpusStore& store, std::ostream& out) {
  for (const auto& r : store.records()) {
    nlohmann::ordered_json j;
    j["key"] = r.key;
    j["element"] = r.element;
    j["pub_type"] = std::string(to_string(r.pub_type));
    j["year"] = r.year ? nlohmann::ordered_json(*r.year) : nlohmann::ordered_json(nullptr);
    j["title"] = r.title;
    j["venue"] = r.venue ? nlohmann::ordered_json(*r.venue) : nlohmann::ordered_json(nullptr);
    j["authors"] = r.authors;
    out << j.dump() << '\n';
  }
  for (const auto& p : store.person_records()) {
    nlohmann::ordered_json j;
    j["person"] = p.key;
    j["names"] = p.names;
    j["urls"] = p.urls;
    out << j.dump() << '\n';
  }
  for (const auto& a : store.author_orcid_attributes()) {
    nlohmann::ordered_json j;
    j["author_orcid"] = a.orcid;
    j["name"] = a.name;
    out << j.dump() << '\n';
  }
  const auto& s = store.stats();
  nlohmann::ordered_json stats;
  stats["records_read"] = s.records_read;
  stats["records_kept"] = s.records_kept;
  stats["dropped_by_type"] = s.dropped_by_type;
  stats["unknown_kinds"] = s.unknown_kinds;
  stats["duplicate_keys"] = s.duplicate_keys;
  stats["empty_author_names"] = s.empty_author_names;
  stats["mentions"] = store.mentions().size();
  out << nlohmann::ordered_json{{"stats", stats}}.dump() << '\n';
}

void write_mentions_csv(const CorpusStore& store, std::ostream& out) {
  csv::write_row(out, {"mention_id", "record_key", "position", "raw_name"});
  for (const auto& m : store.mentions()) {
    csv::write_row(out, {std::to_string(m.id), store.record_of(m).key,
                         std::to_string(m.position), m.raw_name});
  }
}

}  // namespace andbench
