#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "andbench/blocking.hpp"
#include "andbench/clustering.hpp"
#include "andbench/labeling.hpp"

namespace andbench {

struct PairCounts {
  std::uint64_t predicted = 0;
  std::uint64_t truth = 0;
  std::uint64_t intersection = 0;

  bool operator==(const PairCounts&) const = default;
};

/// Pairwise scores for one block. A metric is absent when its denominator
/// is zero (and f1 when either input is absent or both are zero).
struct BlockScore {
  std::string block_key;
  std::size_t block_size = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  PairCounts pairs;
};

/// Harmonic mean, absent unless both inputs are present with a positive sum.
std::optional<double> harmonic_f1(std::optional<double> precision, std::optional<double> recall);

/// Counts predicted, truth and shared same-author pairs among `block`
/// from cluster/label contingency counts. Throws InconsistentInput if a
/// mention is unlabeled or unclustered.
BlockScore pairwise_prf(const Clustering& clustering, const MatchedLabels& labels,
                        std::span<const MentionId> block, std::string block_key = {});

struct BCubedScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Per-mention B-Cubed over the whole universe, averaged over mentions.
BCubedScore bcubed_prf(const Clustering& clustering, const MatchedLabels& labels,
                       std::span<const MentionId> universe);

enum class SdFlavor { sample, population };

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> sd;
  std::size_t blocks_scored = 0;
  std::size_t blocks_excluded = 0;
};

struct Stratum {
  std::size_t block_size = 0;
  std::size_t block_count = 0;
  std::optional<double> mean_precision;
  std::optional<double> mean_recall;
  std::optional<double> mean_f1;
};

struct AggregateScore {
  MetricSummary precision;
  MetricSummary recall;
  MetricSummary f1;
  std::size_t total_blocks = 0;
  std::vector<Stratum> per_size_strata;  // ascending block_size
};

/// Unweighted mean and SD per metric over the blocks where it is defined.
/// With one defined block the SD is 0 under either flavor.
AggregateScore aggregate_scores(std::span<const BlockScore> scores,
                                SdFlavor flavor = SdFlavor::sample);

struct PairRecallResult {
  std::vector<BlockScore> blocks;  // blocks holding ≥1 pair
  AggregateScore aggregate;
  std::size_t blocks_without_pairs = 0;
};

/// Per block: fraction of labeled pairs whose mentions share a cluster.
/// Precision and F1 stay absent. Throws InconsistentInput for a pair whose
/// mentions fall in different blocks or outside the index.
PairRecallResult pair_recall(const Clustering& clustering, const PairLabels& pairs,
                             const BlockIndex& blocks, SdFlavor flavor = SdFlavor::sample);

/// Scores every block of `blocks` restricted to labeled mentions; blocks
/// without labeled members are skipped.
std::vector<BlockScore> score_blocks(const Clustering& clustering, const MatchedLabels& labels,
                                     const BlockIndex& blocks);

}  // namespace andbench
