#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "andbench/blocking.hpp"
#include "andbench/clustering.hpp"
#include "andbench/corpus.hpp"
#include "andbench/labeling.hpp"
#include "andbench/metrics.hpp"
#include "andbench/sources.hpp"
#include "json.hpp"

namespace andbench {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct LabeledDatasetInput {
  std::string name;
  std::filesystem::path path;
};

/// Declarative pipeline configuration, read from a JSON file. Relative paths
/// resolve against the config file's directory.
///
///   {
///     "inputs": {
///       "dump": "dblp.xml.gz", "entities": "dblp.dtd",
///       "kinds": ["article", "inproceedings"],
///       "synonyms": "synonyms.tsv",
///       "orcid_mapping": "orcid.tsv", "orcid_from_dump": true,
///       "citations": "refs.jsonl", "citation_format": "record_json_lines",
///       "labeled_datasets": [{"name": "PENN", "path": "penn.tsv"}]
///     },
///     "disambiguators": ["dblp", "all_initials", "first_initial"],
///     "families": ["manual:PENN", "orcid", "orcid_homonym", "orcid_synonym", "selfcite"],
///     "output_dir": "out",
///     "formats": ["summary_table", "per_block_csv", "figure_data_csv", "json"],
///     "threads": 1,
///     "flags": {
///       "auto_resolve_ambiguity": false, "sd": "sample",
///       "baseline_strip_suffix": true, "corpus_wide_blocking": false,
///       "homonym_rule": "display_string", "synonym_only": true
///     }
///   }
struct PipelineConfig {
  std::filesystem::path dump;
  std::optional<std::filesystem::path> entities;
  std::set<std::string> kinds{"article", "inproceedings"};
  std::optional<std::filesystem::path> synonyms;
  std::optional<std::filesystem::path> orcid_mapping;
  bool orcid_from_dump = true;
  std::optional<std::filesystem::path> citations;
  CitationFormat citation_format = CitationFormat::edge_list;
  std::vector<LabeledDatasetInput> labeled_datasets;

  std::vector<std::string> disambiguators;
  std::vector<std::string> families;
  std::filesystem::path output_dir = "andbench-out";
  std::set<std::string> formats{"summary_table", "per_block_csv", "figure_data_csv", "json"};
  unsigned threads = 1;

  bool auto_resolve_ambiguity = false;
  SdFlavor sd = SdFlavor::sample;
  bool baseline_strip_suffix = true;
  bool corpus_wide_blocking = false;
  NameMatchRule homonym_rule = NameMatchRule::display_string;
  bool synonym_only = true;

  /// Throws ConfigError describing the first problem found.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
};

PipelineConfig load_config(const std::filesystem::path& path);

/// Everything read from disk.
struct PipelineInputs {
  CorpusStore corpus;
  SynonymSet synonyms;
  std::optional<OrcidLinkage> orcid;
  std::optional<CitationGraph> citations;
  std::map<std::string, LabeledSourceDataset> datasets;
};

/// Truth data per labeled family.
struct LabeledFamilies {
  std::map<std::string, MatchedLabels> matched;
  std::map<std::string, AmbiguityReport> ambiguity;
  std::optional<PairLabels> selfcite;

  /// Union of mentions carrying any label, ascending.
  std::vector<MentionId> universe() const;
};

using ProgressSink = std::function<void(const std::string&)>;

PipelineInputs load_inputs(const PipelineConfig& config, const ProgressSink& progress = {});
LabeledFamilies build_labels(const PipelineConfig& config, const PipelineInputs& inputs);
std::map<std::string, Clustering> build_clusterings(const PipelineConfig& config,
                                                    const PipelineInputs& inputs,
                                                    std::span<const MentionId> universe);

struct CombinationResult {
  std::string family;
  std::string method;
  bool ok = false;
  std::string error;
  std::string primary_metric;  // metric plotted against block size
  AggregateScore aggregate;
  std::optional<BCubedScore> bcubed;
  SizeDistribution distribution;
  std::vector<BlockScore> blocks;
  std::optional<MatchStats> match_stats;
  std::size_t labeled_mentions = 0;
  std::size_t distinct_authors = 0;
  std::size_t labeled_pairs = 0;
};

struct EvaluationReport {
  std::string toolkit_version = kToolkitVersion;
  nlohmann::ordered_json config_echo;
  std::vector<CombinationResult> results;

  bool all_ok() const;
};

nlohmann::ordered_json to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::ordered_json& j);

EvaluationReport evaluate(const PipelineConfig& config, const PipelineInputs& inputs,
                          const LabeledFamilies& labels,
                          const std::map<std::string, Clustering>& clusterings);

/// ingest -> label -> block -> disambiguate -> score -> aggregate.
EvaluationReport run_pipeline(const PipelineConfig& config, const ProgressSink& progress = {});

/// Writes the requested formats into `out_dir`: summary.txt, per_block.csv,
/// figure_data.csv, report.json. Throws std::runtime_error naming the path
/// when a file cannot be written.
void emit_report(const EvaluationReport& report, const std::set<std::string>& formats,
                 const std::filesystem::path& out_dir);

/// The summary table as text (also written to summary.txt).
std::string summary_table(const EvaluationReport& report);

/// Writes labels/, ambiguity/ and clusterings/ files under `out_dir`.
void write_labels(const LabeledFamilies& labels, const std::filesystem::path& out_dir);
void write_clusterings(const std::map<std::string, Clustering>& clusterings,
                       const std::filesystem::path& out_dir);

}  // namespace andbench
