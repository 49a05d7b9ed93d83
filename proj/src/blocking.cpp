#include "andbench/blocking.hpp"

#include <algorithm>
#include <stdexcept>

#include "andbench/csv.hpp"
#include "andbench/error.hpp"

namespace andbench {

std::vector<MentionRef> mention_refs(const CorpusStore& corpus) {
  std::vector<MentionRef> refs;
  refs.reserve(corpus.mentions().size());
  for (const auto& m : corpus.mentions()) refs.push_back({m.id, m.raw_name});
  return refs;
}

std::vector<MentionRef> mention_refs(const CorpusStore& corpus, std::span<const MentionId> ids) {
  std::vector<MentionRef> refs;
  refs.reserve(ids.size());
  for (auto id : ids) refs.push_back({id, corpus.mention(id).raw_name});
  return refs;
}

std::string_view to_string(KeyScheme scheme) {
  return scheme == KeyScheme::first_initial ? "first_initial" : "all_initials";
}

KeyScheme key_scheme_from_string(std::string_view name) {
  if (name == "first_initial") return KeyScheme::first_initial;
  if (name == "all_initials") return KeyScheme::all_initials;
  throw std::invalid_argument("unknown key scheme: " + std::string(name));
}

KeyFunction key_function(KeyScheme scheme) {
  if (scheme == KeyScheme::first_initial) {
    return [](const ParsedName& n) { return blocking_key(n).value; };
  }
  return [](const ParsedName& n) { return all_initials_key(n).value; };
}

const std::string* BlockIndex::key_of(MentionId id) const {
  auto it = block_of_.find(id);
  return it == block_of_.end() ? nullptr : it->second;
}

BlockIndex build_blocks(std::span<const MentionRef> mentions, const KeyFunction& key_fn,
                        std::string key_fn_id) {
  BlockIndex index;
  index.key_fn_id_ = std::move(key_fn_id);
  for (const auto& m : mentions) {
    try {
      index.blocks_[key_fn(parse_name(m.raw_name))].push_back(m.id);
    } catch (const NameError& e) {
      index.rejects_.push_back({m.id, e.what()});
    }
  }
  index.block_of_.reserve(mentions.size());
  for (auto& [key, ids] : index.blocks_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto id : ids) index.block_of_.emplace(id, &key);
  }
  std::sort(index.rejects_.begin(), index.rejects_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return index;
}

BlockIndex build_blocks(std::span<const MentionRef> mentions, KeyScheme scheme) {
  return build_blocks(mentions, key_function(scheme), std::string(to_string(scheme)));
}

double SizeDistribution::cumulative_at(std::size_t size) const {
  double ratio = 0.0;
  for (const auto& row : rows) {
    if (row.block_size > size) break;
    ratio = row.cumulative_ratio;
  }
  return ratio;
}

SizeDistribution size_distribution(const std::map<std::size_t, std::size_t>& count_by_size) {
  std::size_t total = 0;
  for (const auto& [size, count] : count_by_size) total += count;
  SizeDistribution dist;
  std::size_t running = 0;
  for (const auto& [size, count] : count_by_size) {
    running += count;
    // The last row is exactly 1.0 by construction (running == total).
    double ratio = running == total ? 1.0 : static_cast<double>(running) / static_cast<double>(total);
    dist.rows.push_back({size, count, ratio});
  }
  return dist;
}

SizeDistribution block_size_distribution(const BlockIndex& index) {
  std::map<std::size_t, std::size_t> by_size;
  for (const auto& [key, ids] : index.blocks()) ++by_size[ids.size()];
  return size_distribution(by_size);
}

void write_distribution_csv(const SizeDistribution& dist, std::ostream& out) {
  csv::write_row(out, {"size", "count", "cumulative_ratio"});
  for (const auto& row : dist.rows) {
    csv::write_row(out, {std::to_string(row.block_size), std::to_string(row.block_count),
                         csv::format_value(row.cumulative_ratio)});
  }
}

}  // namespace andbench
