#include "andbench/metrics.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

#include "andbench/error.hpp"

namespace andbench {

namespace {

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

struct Accumulator {
  std::vector<double> values;

  void add(const std::optional<double>& v) {
    if (v) values.push_back(*v);
  }

  std::optional<double> mean() const {
    if (values.empty()) return std::nullopt;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  }

  std::optional<double> sd(SdFlavor flavor) const {
    auto m = mean();
    if (!m) return std::nullopt;
    if (values.size() == 1) return 0.0;
    double ss = 0.0;
    for (double v : values) ss += (v - *m) * (v - *m);
    double den = static_cast<double>(values.size()) - (flavor == SdFlavor::sample ? 1.0 : 0.0);
    return std::sqrt(ss / den);
  }
};

MetricSummary summarize(const Accumulator& acc, std::size_t total, SdFlavor flavor) {
  return MetricSummary{acc.mean(), acc.sd(flavor), acc.values.size(), total - acc.values.size()};
}

}  // namespace

std::optional<double> harmonic_f1(std::optional<double> precision, std::optional<double> recall) {
  if (!precision || !recall || *precision + *recall == 0.0) return std::nullopt;
  return 2.0 * *precision * *recall / (*precision + *recall);
}

BlockScore pairwise_prf(const Clustering& clustering, const MatchedLabels& labels,
                        std::span<const MentionId> block, std::string block_key) {
  std::unordered_map<ClusterId, std::uint64_t> by_cluster;
  std::unordered_map<std::string_view, std::uint64_t> by_truth;
  std::map<std::pair<ClusterId, std::string_view>, std::uint64_t> joint;
  for (auto id : block) {
    const auto* truth = labels.truth_of(id);
    if (truth == nullptr) {
      throw InconsistentInput("mention " + std::to_string(id) + " has no truth label");
    }
    auto cluster = clustering.cluster_of(id);
    if (!cluster) throw InconsistentInput("mention " + std::to_string(id) + " is not clustered");
    ++by_cluster[*cluster];
    ++by_truth[*truth];
    ++joint[{*cluster, *truth}];
  }
  BlockScore score;
  score.block_key = std::move(block_key);
  score.block_size = block.size();
  for (const auto& [c, n] : by_cluster) score.pairs.predicted += choose2(n);
  for (const auto& [t, n] : by_truth) score.pairs.truth += choose2(n);
  for (const auto& [ct, n] : joint) score.pairs.intersection += choose2(n);
  score.precision = ratio(score.pairs.intersection, score.pairs.predicted);
  score.recall = ratio(score.pairs.intersection, score.pairs.truth);
  score.f1 = harmonic_f1(score.precision, score.recall);
  return score;
}

BCubedScore bcubed_prf(const Clustering& clustering, const MatchedLabels& labels,
                       std::span<const MentionId> universe) {
  if (universe.empty()) throw InconsistentInput("B-Cubed over an empty universe");
  std::unordered_map<ClusterId, std::uint64_t> by_cluster;
  std::unordered_map<std::string_view, std::uint64_t> by_truth;
  std::map<std::pair<ClusterId, std::string_view>, std::uint64_t> joint;
  std::vector<std::pair<ClusterId, std::string_view>> keys;
  keys.reserve(universe.size());
  for (auto id : universe) {
    const auto* truth = labels.truth_of(id);
    auto cluster = clustering.cluster_of(id);
    if (truth == nullptr || !cluster) {
      throw InconsistentInput("mention " + std::to_string(id) + " lacks a label or cluster");
    }
    ++by_cluster[*cluster];
    ++by_truth[*truth];
    ++joint[{*cluster, *truth}];
    keys.emplace_back(*cluster, *truth);
  }
  double p_sum = 0.0;
  double r_sum = 0.0;
  for (const auto& key : keys) {
    auto overlap = static_cast<double>(joint[key]);
    p_sum += overlap / static_cast<double>(by_cluster[key.first]);
    r_sum += overlap / static_cast<double>(by_truth[key.second]);
  }
  BCubedScore score;
  score.precision = p_sum / static_cast<double>(universe.size());
  score.recall = r_sum / static_cast<double>(universe.size());
  score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
  return score;
}

AggregateScore aggregate_scores(std::span<const BlockScore> scores, SdFlavor flavor) {
  Accumulator p, r, f;
  struct StratumAcc {
    std::size_t count = 0;
    Accumulator p, r, f;
  };
  std::map<std::size_t, StratumAcc> strata;
  for (const auto& s : scores) {
    p.add(s.precision);
    r.add(s.recall);
    f.add(s.f1);
    auto& st = strata[s.block_size];
    ++st.count;
    st.p.add(s.precision);
    st.r.add(s.recall);
    st.f.add(s.f1);
  }
  AggregateScore agg;
  agg.total_blocks = scores.size();
  agg.precision = summarize(p, scores.size(), flavor);
  agg.recall = summarize(r, scores.size(), flavor);
  agg.f1 = summarize(f, scores.size(), flavor);
  for (const auto& [size, st] : strata) {
    agg.per_size_strata.push_back({size, st.count, st.p.mean(), st.r.mean(), st.f.mean()});
  }
  return agg;
}

PairRecallResult pair_recall(const Clustering& clustering, const PairLabels& pairs,
                             const BlockIndex& blocks, SdFlavor flavor) {
  struct Tally {
    std::uint64_t pairs = 0;
    std::uint64_t together = 0;
  };
  std::map<const std::string*, Tally> tallies;
  for (const auto& pair : pairs.pairs) {
    const auto* ka = blocks.key_of(pair.a);
    const auto* kb = blocks.key_of(pair.b);
    if (ka == nullptr || kb == nullptr) {
      throw InconsistentInput("pair mention outside the block index");
    }
    if (ka != kb) {
      throw InconsistentInput("pair (" + std::to_string(pair.a) + "," + std::to_string(pair.b) +
                              ") spans blocks " + *ka + " and " + *kb);
    }
    auto ca = clustering.cluster_of(pair.a);
    auto cb = clustering.cluster_of(pair.b);
    if (!ca || !cb) throw InconsistentInput("pair mention is not clustered");
    auto& t = tallies[ka];
    ++t.pairs;
    if (*ca == *cb) ++t.together;
  }
  PairRecallResult result;
  for (const auto& [key, ids] : blocks.blocks()) {
    auto it = tallies.find(&key);
    if (it == tallies.end()) {
      ++result.blocks_without_pairs;
      continue;
    }
    BlockScore s;
    s.block_key = key;
    s.block_size = ids.size();
    s.pairs.truth = it->second.pairs;
    s.pairs.intersection = it->second.together;
    s.recall = ratio(it->second.together, it->second.pairs);
    result.blocks.push_back(std::move(s));
  }
  result.aggregate = aggregate_scores(result.blocks, flavor);
  return result;
}

std::vector<BlockScore> score_blocks(const Clustering& clustering, const MatchedLabels& labels,
                                     const BlockIndex& blocks) {
  std::vector<BlockScore> scores;
  std::vector<MentionId> members;
  for (const auto& [key, ids] : blocks.blocks()) {
    members.clear();
    for (auto id : ids) {
      if (labels.truth_of(id) != nullptr) members.push_back(id);
    }
    if (members.empty()) continue;
    scores.push_back(pairwise_prf(clustering, labels, members, key));
  }
  return scores;
}

}  // namespace andbench
