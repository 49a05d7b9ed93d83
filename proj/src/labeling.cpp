#include "andbench/labeling.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "andbench/csv.hpp"
#include "andbench/error.hpp"
#include "json.hpp"

namespace andbench {

std::size_t MatchedLabels::distinct_authors() const {
  std::set<std::string_view> ids;
  for (const auto& [m, id] : truth) ids.insert(id);
  return ids.size();
}

std::vector<MentionId> MatchedLabels::mention_ids() const {
  std::vector<MentionId> ids;
  ids.reserve(truth.size());
  for (const auto& [m, id] : truth) ids.push_back(m);
  return ids;
}

int FieldAgreement::agreeing_fields() const {
  int n = title ? 1 : 0;
  n += (year && *year) ? 1 : 0;
  n += (venue && *venue) ? 1 : 0;
  n += (position && *position) ? 1 : 0;
  n += full_name ? 1 : 0;
  return n;
}

namespace {

std::vector<std::string> folded_forenames(const ParsedName& n) {
  std::vector<std::string> out;
  for (const auto& f : n.forenames) out.push_back(normalize_name_part(f));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

MatchResult match_labeled_records(const LabeledSourceDataset& dataset, const CorpusStore& corpus,
                                  std::string source_tag, const MatchOptions& options) {
  MatchResult result;
  result.labels.source_tag = std::move(source_tag);
  auto& stats = result.labels.match_stats;

  std::unordered_map<std::string, std::vector<std::uint32_t>> by_title;
  const auto records = corpus.records();
  for (std::uint32_t r = 0; r < records.size(); ++r) {
    by_title[normalize_title(records[r].title)].push_back(r);
  }

  for (std::size_t e = 0; e < dataset.entries.size(); ++e) {
    const auto& entry = dataset.entries[e];
    ++stats.entries_in;
    std::optional<ParsedName> entry_name;
    try {
      entry_name = parse_name(entry.raw_name);
    } catch (const NameError&) {
      ++stats.entries_unmatched;
      continue;
    }
    const auto entry_forenames = folded_forenames(*entry_name);
    const std::string title = normalize_title(entry.title);
    const std::optional<std::string> venue =
        entry.venue ? std::optional(normalize_title(*entry.venue)) : std::nullopt;

    std::vector<MatchCandidate> candidates;
    auto it = by_title.find(title);
    if (it != by_title.end()) {
      for (auto r : it->second) {
        const auto& rec = records[r];
        FieldAgreement agreement;
        if (entry.year && rec.year) {
          if (*entry.year != *rec.year) continue;
          agreement.year = true;
        }
        if (venue && rec.venue) {
          if (*venue != normalize_title(*rec.venue)) continue;
          agreement.venue = true;
        }
        for (auto mid : corpus.record_mentions(r)) {
          const auto& m = corpus.mention(mid);
          if (entry.position && m.position != *entry.position) continue;
          ParsedName name;
          try {
            name = parse_name(m.raw_name);
          } catch (const NameError&) {
            continue;
          }
          if (!names_compatible(*entry_name, name)) continue;
          FieldAgreement a = agreement;
          if (entry.position) a.position = true;
          a.full_name = folded_forenames(name) == entry_forenames;
          candidates.push_back({rec.key, mid, m.position, a});
        }
      }
    }

    if (candidates.size() >= 2 && options.auto_resolve) {
      std::vector<int> scores;
      for (const auto& c : candidates) scores.push_back(c.agreement.agreeing_fields());
      int best = *std::max_element(scores.begin(), scores.end());
      if (std::count(scores.begin(), scores.end(), best) == 1) {
        auto winner = candidates[static_cast<std::size_t>(
            std::find(scores.begin(), scores.end(), best) - scores.begin())];
        candidates = {std::move(winner)};
      }
    }

    if (candidates.empty()) {
      ++stats.entries_unmatched;
    } else if (candidates.size() == 1) {
      auto [pos, inserted] =
          result.labels.truth.try_emplace(candidates.front().mention, entry.truth_author_id);
      if (inserted || pos->second == entry.truth_author_id) {
        ++stats.entries_matched;
      } else {
        ++stats.entries_unmatched;
        ++stats.conflicts;
      }
    } else {
      ++stats.ambiguous_count;
      result.ambiguity.items.push_back({e, entry, std::move(candidates)});
    }
  }
  return result;
}

MatchedLabels build_orcid_labels(const CorpusStore& corpus, const OrcidLinkage& links) {
  MatchedLabels labels;
  labels.source_tag = "orcid";
  for (const auto& [mention, orcid] : links.links) {
    if (mention < corpus.mentions().size()) labels.truth.emplace(mention, orcid);
  }
  labels.match_stats.entries_in = links.links.size();
  labels.match_stats.entries_matched = labels.truth.size();
  labels.match_stats.entries_unmatched = links.links.size() - labels.truth.size();
  return labels;
}

namespace {

struct BlockView {
  std::vector<MentionId> members;        // labeled members of the block
  std::vector<std::string> names;        // display names, parallel to members
  std::size_t distinct_authors = 0;
};

// Labeled members of each block with their suffix-stripped display names.
template <typename Fn>
void for_each_labeled_block(const MatchedLabels& labels, const CorpusStore& corpus,
                            const BlockIndex& blocks, Fn&& fn) {
  for (const auto& [key, ids] : blocks.blocks()) {
    BlockView view;
    std::set<std::string_view> authors;
    for (auto id : ids) {
      const auto* truth = labels.truth_of(id);
      if (truth == nullptr) continue;
      view.members.push_back(id);
      view.names.push_back(parse_name(corpus.mention(id).raw_name).display_name);
      authors.insert(*truth);
    }
    view.distinct_authors = authors.size();
    if (!view.members.empty()) fn(view);
  }
}

// Number of other labeled mentions in the block whose name matches member i.
std::vector<std::size_t> matching_name_counts(const BlockView& view, NameMatchRule rule) {
  std::vector<std::size_t> counts(view.members.size());
  if (rule == NameMatchRule::block_key) {
    std::fill(counts.begin(), counts.end(), view.members.size() - 1);
    return counts;
  }
  std::unordered_map<std::string_view, std::size_t> freq;
  for (const auto& n : view.names) ++freq[n];
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = freq[view.names[i]] - 1;
  return counts;
}

MatchedLabels subset_of(std::string tag) {
  MatchedLabels out;
  out.source_tag = std::move(tag);
  return out;
}

void fill_subset_stats(MatchedLabels& out, const MatchedLabels& labels) {
  out.match_stats.entries_in = labels.truth.size();
  out.match_stats.entries_matched = out.truth.size();
  out.match_stats.entries_unmatched = labels.truth.size() - out.truth.size();
}

}  // namespace

MatchedLabels extract_orcid_homonym_subset(const MatchedLabels& labels, const CorpusStore& corpus,
                                           const BlockIndex& blocks, const SubsetOptions& options) {
  auto out = subset_of(labels.source_tag + "_homonym");
  for_each_labeled_block(labels, corpus, blocks, [&](const BlockView& view) {
    if (view.distinct_authors < 2) return;
    auto counts = matching_name_counts(view, options.rule);
    for (std::size_t i = 0; i < view.members.size(); ++i) {
      if (counts[i] >= 1) out.truth.emplace(view.members[i], *labels.truth_of(view.members[i]));
    }
  });
  fill_subset_stats(out, labels);
  return out;
}

MatchedLabels extract_orcid_synonym_subset(const MatchedLabels& labels, const CorpusStore& corpus,
                                           const BlockIndex& blocks, const SubsetOptions& options) {
  auto out = subset_of(labels.source_tag + "_synonym");
  std::map<std::string_view, std::set<std::string>> names_by_author;
  std::map<MentionId, std::string_view> author_of;
  for_each_labeled_block(labels, corpus, blocks, [&](const BlockView& view) {
    if (view.distinct_authors != 1) return;
    auto counts = matching_name_counts(view, options.rule);
    for (std::size_t i = 0; i < view.members.size(); ++i) {
      if (counts[i] != 0) continue;
      const std::string& truth = *labels.truth_of(view.members[i]);
      names_by_author[truth].insert(view.names[i]);
      author_of.emplace(view.members[i], truth);
    }
  });
  for (const auto& [mention, author] : author_of) {
    if (options.synonym_only && names_by_author[author].size() < 2) continue;
    out.truth.emplace(mention, std::string(author));
  }
  fill_subset_stats(out, labels);
  return out;
}

std::vector<MentionId> PairLabels::mention_ids() const {
  std::vector<MentionId> ids;
  ids.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    ids.push_back(p.a);
    ids.push_back(p.b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

PairLabels extract_self_citation_pairs(const CorpusStore& corpus, const CitationGraph& graph) {
  PairLabels out;
  out.source_tag = "selfcite";

  // First-initial keys per mention, computed once; empty = unparseable.
  std::vector<std::string> keys(corpus.mentions().size());
  for (const auto& m : corpus.mentions()) {
    try {
      keys[m.id] = blocking_key(parse_name(m.raw_name)).value;
    } catch (const NameError&) {
    }
  }
  auto unique_keys = [&](std::uint32_t record) {
    std::map<std::string_view, std::optional<MentionId>> by_key;
    for (auto id : corpus.record_mentions(record)) {
      if (keys[id].empty()) continue;
      auto [it, inserted] = by_key.try_emplace(keys[id], id);
      if (!inserted) it->second.reset();  // two or more mentions share the key
    }
    return by_key;
  };

  for (const auto& [citing, cited] : graph.edges) {
    auto p = corpus.find_record(citing);
    auto q = corpus.find_record(cited);
    if (!p || !q) {
      ++out.edges_unresolved;
      continue;
    }
    if (*p == *q) continue;
    ++out.edges_used;
    auto p_keys = unique_keys(*p);
    auto q_keys = unique_keys(*q);
    for (const auto& [key, a] : p_keys) {
      if (!a) continue;
      auto it = q_keys.find(key);
      if (it == q_keys.end() || !it->second) continue;
      MentionId x = *a, y = *it->second;
      out.pairs.push_back({std::min(x, y), std::max(x, y)});
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  out.pairs.erase(std::unique(out.pairs.begin(), out.pairs.end()), out.pairs.end());
  return out;
}

void write_labels_csv(const MatchedLabels& labels, std::ostream& out) {
  csv::write_row(out, {"mention_id", "truth_author_id", "source_tag"});
  for (const auto& [mention, id] : labels.truth) {
    csv::write_row(out, {std::to_string(mention), id, labels.source_tag});
  }
}

void write_pairs_csv(const PairLabels& pairs, std::ostream& out) {
  csv::write_row(out, {"mention_id_a", "mention_id_b"});
  for (const auto& p : pairs.pairs) csv::write_row(out, {std::to_string(p.a), std::to_string(p.b)});
}

void write_ambiguity_jsonl(const AmbiguityReport& report, std::ostream& out) {
  auto optional_bool = [](const std::optional<bool>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  for (const auto& item : report.items) {
    nlohmann::ordered_json j;
    j["entry_index"] = item.entry_index;
    j["author_id"] = item.entry.truth_author_id;
    j["name"] = item.entry.raw_name;
    j["title"] = item.entry.title;
    j["year"] = item.entry.year ? nlohmann::ordered_json(*item.entry.year) : nlohmann::ordered_json(nullptr);
    j["venue"] = item.entry.venue ? nlohmann::ordered_json(*item.entry.venue) : nlohmann::ordered_json(nullptr);
    j["position"] = item.entry.position ? nlohmann::ordered_json(*item.entry.position)
                                        : nlohmann::ordered_json(nullptr);
    auto& cands = j["candidates"] = nlohmann::ordered_json::array();
    for (const auto& c : item.candidates) {
      nlohmann::ordered_json cj;
      cj["record_key"] = c.record_key;
      cj["mention_id"] = c.mention;
      cj["position"] = c.position;
      cj["agreement"] = {{"title", c.agreement.title},
                         {"year", optional_bool(c.agreement.year)},
                         {"venue", optional_bool(c.agreement.venue)},
                         {"position", optional_bool(c.agreement.position)},
                         {"full_name", c.agreement.full_name},
                         {"agreeing_fields", c.agreement.agreeing_fields()}};
      cands.push_back(std::move(cj));
    }
    out << j.dump() << '\n';
  }
}

}  // namespace andbench
