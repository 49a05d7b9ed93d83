#include "andbench/clustering.hpp"

#include <algorithm>

#include "andbench/csv.hpp"
#include "andbench/error.hpp"

namespace andbench {

void Clustering::assign(MentionId id, std::string_view label) {
  auto [it, inserted] = intern_.try_emplace(std::string(label), static_cast<ClusterId>(labels_.size()));
  if (inserted) labels_.push_back(it->first);
  assignment_[id] = it->second;
}

std::optional<ClusterId> Clustering::cluster_of(MentionId id) const {
  auto it = assignment_.find(id);
  if (it == assignment_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<MentionId, ClusterId>> Clustering::sorted_assignment() const {
  std::vector<std::pair<MentionId, ClusterId>> out(assignment_.begin(), assignment_.end());
  std::sort(out.begin(), out.end());
  return out;
}

Clustering dblp_native_clustering(std::span<const MentionRef> mentions, const SynonymSet& synonyms) {
  Clustering clustering("dblp");
  std::string name;
  for (const auto& m : mentions) {
    name.assign(m.raw_name);
    clustering.assign(m.id, synonyms.root(name));
  }
  return clustering;
}

Clustering dblp_native_clustering(const CorpusStore& corpus, const SynonymSet& synonyms) {
  return dblp_native_clustering(mention_refs(corpus), synonyms);
}

BaselineResult baseline_clustering(std::span<const MentionRef> mentions, KeyScheme scheme,
                                   const BaselineOptions& options) {
  BaselineResult result{Clustering(std::string(to_string(scheme))), {}};
  const auto key_fn = key_function(scheme);
  for (const auto& m : mentions) {
    try {
      auto parsed = parse_name(m.raw_name);
      std::string key = key_fn(parsed);
      if (!options.strip_suffix && parsed.homonym_suffix) key += " " + *parsed.homonym_suffix;
      result.clustering.assign(m.id, key);
    } catch (const NameError& e) {
      result.rejected.push_back({m.id, e.what()});
    }
  }
  return result;
}

void write_clustering_csv(const Clustering& clustering, std::ostream& out) {
  csv::write_row(out, {"mention_id", "cluster_id"});
  for (const auto& [id, cluster] : clustering.sorted_assignment()) {
    csv::write_row(out, {std::to_string(id), clustering.label(cluster)});
  }
}

}  // namespace andbench
