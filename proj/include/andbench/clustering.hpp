#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "andbench/blocking.hpp"
#include "andbench/corpus.hpp"
#include "andbench/sources.hpp"

namespace andbench {

using ClusterId = std::uint32_t;

/// A partition of mentions into predicted author identities. Cluster ids are
/// dense and interned from string labels; only equality is meaningful.
class Clustering {
 public:
  explicit Clustering(std::string method_id = {}) : method_id_(std::move(method_id)) {}

  /// Assigns `id` to the cluster named `label`, replacing any prior
  /// assignment.
  void assign(MentionId id, std::string_view label);

  std::optional<ClusterId> cluster_of(MentionId id) const;
  const std::string& label(ClusterId cluster) const { return labels_.at(cluster); }

  const std::string& method_id() const { return method_id_; }
  std::size_t size() const { return assignment_.size(); }
  std::size_t cluster_count() const { return labels_.size(); }

  /// (mention, cluster) sorted by mention id.
  std::vector<std::pair<MentionId, ClusterId>> sorted_assignment() const;

 private:
  std::string method_id_;
  std::unordered_map<MentionId, ClusterId> assignment_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, ClusterId> intern_;
};

/// DBLP's own identity: mentions share a cluster iff their raw name strings
/// (suffix included) are equal or connected through the synonym list.
Clustering dblp_native_clustering(std::span<const MentionRef> mentions, const SynonymSet& synonyms);
Clustering dblp_native_clustering(const CorpusStore& corpus, const SynonymSet& synonyms);

struct BaselineOptions {
  /// Drop homonym suffixes before keying. Turning this off appends the
  /// suffix to the key (sensitivity runs only).
  bool strip_suffix = true;
};

struct BaselineResult {
  Clustering clustering;
  std::vector<RejectedMention> rejected;
};

/// Clusters by all_initials_key or blocking_key of the parsed name.
BaselineResult baseline_clustering(std::span<const MentionRef> mentions, KeyScheme scheme,
                                   const BaselineOptions& options = {});

/// mention_id,cluster_id
void write_clustering_csv(const Clustering& clustering, std::ostream& out);

}  // namespace andbench
