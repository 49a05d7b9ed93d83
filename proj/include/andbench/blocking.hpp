#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "andbench/corpus.hpp"
#include "andbench/name.hpp"

namespace andbench {

/// A mention seen through its id and name only; the common currency for
/// "a set of mentions" across blocking, clustering and labeling.
struct MentionRef {
  MentionId id = 0;
  std::string_view raw_name;
};

std::vector<MentionRef> mention_refs(const CorpusStore& corpus);
std::vector<MentionRef> mention_refs(const CorpusStore& corpus, std::span<const MentionId> ids);

enum class KeyScheme { first_initial, all_initials };

std::string_view to_string(KeyScheme scheme);
KeyScheme key_scheme_from_string(std::string_view name);

using KeyFunction = std::function<std::string(const ParsedName&)>;

KeyFunction key_function(KeyScheme scheme);

struct RejectedMention {
  MentionId id = 0;
  std::string reason;
};

/// Partition of a mention set by key. Keys iterate in sorted order and each
/// block lists its mentions in ascending id order.
class BlockIndex {
 public:
  const std::map<std::string, std::vector<MentionId>>& blocks() const { return blocks_; }
  const std::string& key_fn_id() const { return key_fn_id_; }
  const std::vector<RejectedMention>& rejects() const { return rejects_; }

  /// Key of the block holding `id`, or nullptr.
  const std::string* key_of(MentionId id) const;
  std::size_t mention_count() const { return block_of_.size(); }
  std::size_t size() const { return blocks_.size(); }

 private:
  friend BlockIndex build_blocks(std::span<const MentionRef>, const KeyFunction&, std::string);

  std::map<std::string, std::vector<MentionId>> blocks_;
  std::unordered_map<MentionId, const std::string*> block_of_;
  std::string key_fn_id_;
  std::vector<RejectedMention> rejects_;
};

/// Names that fail to parse go to rejects() instead of a block.
BlockIndex build_blocks(std::span<const MentionRef> mentions, const KeyFunction& key_fn,
                        std::string key_fn_id);
BlockIndex build_blocks(std::span<const MentionRef> mentions,
                        KeyScheme scheme = KeyScheme::first_initial);

struct SizeRow {
  std::size_t block_size = 0;
  std::size_t block_count = 0;
  double cumulative_ratio = 0.0;

  bool operator==(const SizeRow&) const = default;
};

struct SizeDistribution {
  std::vector<SizeRow> rows;  // ascending block_size

  /// Cumulative ratio of blocks with size <= `size` (0 when below every row).
  double cumulative_at(std::size_t size) const;
  std::size_t max_size() const { return rows.empty() ? 0 : rows.back().block_size; }
};

SizeDistribution block_size_distribution(const BlockIndex& index);
SizeDistribution size_distribution(const std::map<std::size_t, std::size_t>& count_by_size);

/// size,count,cumulative_ratio
void write_distribution_csv(const SizeDistribution& dist, std::ostream& out);

}  // namespace andbench
