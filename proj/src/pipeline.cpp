#include "andbench/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "andbench/csv.hpp"
#include "andbench/error.hpp"
#include "andbench/io.hpp"
#include "andbench/utf8.hpp"

namespace andbench {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

const std::set<std::string> kMethods = {"dblp", "all_initials", "first_initial"};
const std::set<std::string> kFormats = {"summary_table", "per_block_csv", "figure_data_csv", "json"};

bool is_orcid_family(const std::string& f) {
  return f == "orcid" || f == "orcid_homonym" || f == "orcid_synonym";
}

std::optional<std::string> manual_name(const std::string& family) {
  constexpr std::string_view prefix = "manual:";
  if (family.rfind(prefix, 0) != 0) return std::nullopt;
  return family.substr(prefix.size());
}

std::string primary_metric_for(const std::string& family) {
  if (family == "orcid_homonym") return "precision";
  if (family == "orcid_synonym" || family == "selfcite") return "recall";
  return "f1";
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> number_or_null(const ojson& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string file_safe(std::string name) {
  for (char& c : name) {
    if (c == ':' || c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return name;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void PipelineConfig::validate() const {
  if (disambiguators.empty()) throw ConfigError("no disambiguators selected");
  if (families.empty()) throw ConfigError("no labeled-data families selected");
  for (const auto& m : disambiguators) {
    if (!kMethods.count(m)) throw ConfigError("unknown disambiguator '" + m + "'");
  }
  for (const auto& f : formats) {
    if (!kFormats.count(f)) throw ConfigError("unknown report format '" + f + "'");
  }
  auto must_exist = [](const fs::path& p, const char* what) {
    if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  };
  if (dump.empty()) throw ConfigError("inputs.dump is required");
  must_exist(dump, "dump");
  if (entities) must_exist(*entities, "entity table");
  if (synonyms) must_exist(*synonyms, "synonym file");
  if (orcid_mapping) must_exist(*orcid_mapping, "ORCID mapping file");
  if (citations) must_exist(*citations, "citation graph");
  std::set<std::string> dataset_names;
  for (const auto& d : labeled_datasets) {
    must_exist(d.path, "labeled dataset");
    if (!dataset_names.insert(d.name).second) {
      throw ConfigError("duplicate labeled dataset name '" + d.name + "'");
    }
  }
  for (const auto& f : families) {
    if (auto name = manual_name(f)) {
      if (!dataset_names.count(*name)) throw ConfigError("family '" + f + "' has no labeled dataset");
    } else if (is_orcid_family(f)) {
      if (!orcid_from_dump && !orcid_mapping) {
        throw ConfigError("family '" + f + "' needs orcid_mapping or orcid_from_dump");
      }
    } else if (f == "selfcite") {
      if (!citations) throw ConfigError("family 'selfcite' needs inputs.citations");
    } else {
      throw ConfigError("unknown labeled-data family '" + f + "'");
    }
  }
  if (threads == 0) throw ConfigError("threads must be ≥ 1");
}

ojson PipelineConfig::to_json() const {
  ojson inputs;
  inputs["dump"] = dump.string();
  inputs["entities"] = entities ? ojson(entities->string()) : ojson(nullptr);
  inputs["kinds"] = kinds;
  inputs["synonyms"] = synonyms ? ojson(synonyms->string()) : ojson(nullptr);
  inputs["orcid_mapping"] = orcid_mapping ? ojson(orcid_mapping->string()) : ojson(nullptr);
  inputs["orcid_from_dump"] = orcid_from_dump;
  inputs["citations"] = citations ? ojson(citations->string()) : ojson(nullptr);
  inputs["citation_format"] =
      citation_format == CitationFormat::edge_list ? "edge_list" : "record_json_lines";
  auto& ds = inputs["labeled_datasets"] = ojson::array();
  for (const auto& d : labeled_datasets) ds.push_back({{"name", d.name}, {"path", d.path.string()}});

  ojson j;
  j["inputs"] = std::move(inputs);
  j["disambiguators"] = disambiguators;
  j["families"] = families;
  j["output_dir"] = output_dir.string();
  j["formats"] = formats;
  j["threads"] = threads;
  j["flags"] = {{"auto_resolve_ambiguity", auto_resolve_ambiguity},
                {"sd", sd == SdFlavor::sample ? "sample" : "population"},
                {"baseline_strip_suffix", baseline_strip_suffix},
                {"corpus_wide_blocking", corpus_wide_blocking},
                {"homonym_rule", homonym_rule == NameMatchRule::display_string ? "display_string"
                                                                                : "block_key"},
                {"synonym_only", synonym_only}};
  return j;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const fs::path& base_dir) {
  PipelineConfig c;
  try {
    const auto& in = j.at("inputs");
    c.dump = resolve(base_dir, in.at("dump").get<std::string>());
    auto optional_path = [&](const char* key) -> std::optional<fs::path> {
      if (!in.contains(key) || in[key].is_null()) return std::nullopt;
      return resolve(base_dir, in[key].get<std::string>());
    };
    c.entities = optional_path("entities");
    c.synonyms = optional_path("synonyms");
    c.orcid_mapping = optional_path("orcid_mapping");
    c.citations = optional_path("citations");
    if (in.contains("kinds")) c.kinds = in["kinds"].get<std::set<std::string>>();
    c.orcid_from_dump = in.value("orcid_from_dump", true);
    auto format = in.value("citation_format", std::string("edge_list"));
    if (format == "edge_list") {
      c.citation_format = CitationFormat::edge_list;
    } else if (format == "record_json_lines") {
      c.citation_format = CitationFormat::record_json_lines;
    } else {
      throw ConfigError("unknown citation_format '" + format + "'");
    }
    if (in.contains("labeled_datasets")) {
      for (const auto& d : in["labeled_datasets"]) {
        c.labeled_datasets.push_back(
            {d.at("name").get<std::string>(), resolve(base_dir, d.at("path").get<std::string>())});
      }
    }
    c.disambiguators = j.value("disambiguators", std::vector<std::string>{});
    c.families = j.value("families", std::vector<std::string>{});
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    if (j.contains("formats")) c.formats = j["formats"].get<std::set<std::string>>();
    c.threads = j.value("threads", 1u);
    if (j.contains("flags")) {
      const auto& f = j["flags"];
      c.auto_resolve_ambiguity = f.value("auto_resolve_ambiguity", false);
      auto sd = f.value("sd", std::string("sample"));
      if (sd != "sample" && sd != "population") throw ConfigError("flags.sd must be sample or population");
      c.sd = sd == "sample" ? SdFlavor::sample : SdFlavor::population;
      c.baseline_strip_suffix = f.value("baseline_strip_suffix", true);
      c.corpus_wide_blocking = f.value("corpus_wide_blocking", false);
      auto rule = f.value("homonym_rule", std::string("display_string"));
      if (rule != "display_string" && rule != "block_key") {
        throw ConfigError("flags.homonym_rule must be display_string or block_key");
      }
      c.homonym_rule = rule == "display_string" ? NameMatchRule::display_string : NameMatchRule::block_key;
      c.synonym_only = f.value("synonym_only", true);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON: " + path.string());
  return PipelineConfig::from_json(j, fs::absolute(path).parent_path());
}

// ---------------------------------------------------------------------------
// Stages

PipelineInputs load_inputs(const PipelineConfig& config, const ProgressSink& progress) {
  auto note = [&](const std::string& msg) {
    if (progress) progress(msg);
  };
  PipelineInputs inputs;

  EntityTable entities = EntityTable::latin1();
  if (config.entities) {
    auto dtd = open_input(*config.entities);
    entities = EntityTable::from_dtd(slurp(*dtd));
  }
  {
    auto dump = open_input(config.dump);
    IngestProgress p;
    p.interval = 1'000'000;
    p.callback = [&](const IngestStats& s) {
      note("ingest: " + std::to_string(s.records_read) + " records read, " +
           std::to_string(s.records_kept) + " kept");
    };
    IngestFilter filter;
    filter.kept_kinds = config.kinds;
    inputs.corpus = ingest_dblp(*dump, filter, entities, p);
    note("ingest: done, " + std::to_string(inputs.corpus.stats().records_kept) + " records, " +
         std::to_string(inputs.corpus.mentions().size()) + " mentions");
  }

  if (config.synonyms) {
    auto in = open_input(*config.synonyms);
    auto load = load_synonym_pairs(*in);
    for (const auto& e : load.errors) {
      note("synonyms: line " + std::to_string(e.line) + ": " + e.message);
    }
    inputs.synonyms = std::move(load.synonyms);
  }

  const bool wants_orcid = std::any_of(config.families.begin(), config.families.end(), is_orcid_family);
  if (wants_orcid) {
    std::unique_ptr<std::istream> mapping;
    if (config.orcid_mapping) mapping = open_input(*config.orcid_mapping);
    inputs.orcid = load_orcid_links(inputs.corpus, mapping.get(), config.orcid_from_dump);
    note("orcid: " + std::to_string(inputs.orcid->links.size()) + " linked mentions, " +
         std::to_string(inputs.orcid->distinct_orcids()) + " ORCIDs, " +
         std::to_string(inputs.orcid->rejected_invalid) + " rejected, " +
         std::to_string(inputs.orcid->conflicts.size()) + " conflicting names");
  }

  if (config.citations &&
      std::find(config.families.begin(), config.families.end(), "selfcite") != config.families.end()) {
    auto in = open_input(*config.citations);
    inputs.citations = load_citation_graph(*in, config.citation_format);
    note("citations: " + std::to_string(inputs.citations->edges.size()) + " edges, " +
         std::to_string(inputs.citations->errors.size()) + " malformed lines");
  }

  for (const auto& d : config.labeled_datasets) {
    auto in = open_input(d.path);
    inputs.datasets.emplace(d.name, load_labeled_dataset(*in));
  }
  return inputs;
}

std::vector<MentionId> LabeledFamilies::universe() const {
  std::vector<MentionId> ids;
  for (const auto& [name, labels] : matched) {
    for (const auto& [m, t] : labels.truth) ids.push_back(m);
  }
  if (selfcite) {
    auto more = selfcite->mention_ids();
    ids.insert(ids.end(), more.begin(), more.end());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

LabeledFamilies build_labels(const PipelineConfig& config, const PipelineInputs& inputs) {
  LabeledFamilies out;
  std::optional<MatchedLabels> orcid;
  std::optional<BlockIndex> orcid_blocks;
  for (const auto& family : config.families) {
    if (auto name = manual_name(family)) {
      MatchOptions opts;
      opts.auto_resolve = config.auto_resolve_ambiguity;
      auto result = match_labeled_records(inputs.datasets.at(*name), inputs.corpus, family, opts);
      out.matched.emplace(family, std::move(result.labels));
      out.ambiguity.emplace(family, std::move(result.ambiguity));
    } else if (is_orcid_family(family)) {
      if (!orcid) {
        orcid = build_orcid_labels(inputs.corpus, *inputs.orcid);
        auto ids = orcid->mention_ids();
        orcid_blocks = build_blocks(mention_refs(inputs.corpus, ids), KeyScheme::first_initial);
      }
      SubsetOptions opts;
      opts.rule = config.homonym_rule;
      opts.synonym_only = config.synonym_only;
      if (family == "orcid") {
        out.matched.emplace(family, *orcid);
      } else if (family == "orcid_homonym") {
        out.matched.emplace(family,
                            extract_orcid_homonym_subset(*orcid, inputs.corpus, *orcid_blocks, opts));
      } else {
        out.matched.emplace(family,
                            extract_orcid_synonym_subset(*orcid, inputs.corpus, *orcid_blocks, opts));
      }
    } else if (family == "selfcite") {
      out.selfcite = extract_self_citation_pairs(inputs.corpus, *inputs.citations);
    }
  }
  return out;
}

std::map<std::string, Clustering> build_clusterings(const PipelineConfig& config,
                                                    const PipelineInputs& inputs,
                                                    std::span<const MentionId> universe) {
  std::map<std::string, Clustering> out;
  const auto refs = mention_refs(inputs.corpus, universe);
  for (const auto& method : config.disambiguators) {
    if (method == "dblp") {
      out.emplace(method, dblp_native_clustering(refs, inputs.synonyms));
    } else {
      BaselineOptions opts;
      opts.strip_suffix = config.baseline_strip_suffix;
      out.emplace(method, baseline_clustering(refs, key_scheme_from_string(method), opts).clustering);
    }
  }
  return out;
}

namespace {

struct FamilyBlocks {
  BlockIndex index;
  SizeDistribution distribution;
  std::map<std::string, std::size_t> corpus_sizes;  // corpus-wide mode only
};

FamilyBlocks family_blocks(const PipelineConfig& config, const PipelineInputs& inputs,
                           std::span<const MentionId> universe, const BlockIndex* corpus_blocks) {
  FamilyBlocks fb;
  fb.index = build_blocks(mention_refs(inputs.corpus, universe), KeyScheme::first_initial);
  if (config.corpus_wide_blocking && corpus_blocks != nullptr) {
    std::map<std::size_t, std::size_t> by_size;
    for (const auto& [key, ids] : fb.index.blocks()) {
      auto it = corpus_blocks->blocks().find(key);
      std::size_t size = it == corpus_blocks->blocks().end() ? ids.size() : it->second.size();
      fb.corpus_sizes.emplace(key, size);
      ++by_size[size];
    }
    fb.distribution = size_distribution(by_size);
  } else {
    fb.distribution = block_size_distribution(fb.index);
  }
  return fb;
}

CombinationResult evaluate_one(const PipelineConfig& config, const std::string& family,
                               const std::string& method, const LabeledFamilies& labels,
                               const FamilyBlocks& blocks, const Clustering& clustering) {
  CombinationResult r;
  r.family = family;
  r.method = method;
  r.primary_metric = primary_metric_for(family);
  r.distribution = blocks.distribution;
  try {
    if (family == "selfcite") {
      const auto& pairs = *labels.selfcite;
      auto pr = pair_recall(clustering, pairs, blocks.index, config.sd);
      r.blocks = std::move(pr.blocks);
      r.labeled_pairs = pairs.pairs.size();
      r.labeled_mentions = blocks.index.mention_count();
    } else {
      const auto& truth = labels.matched.at(family);
      r.blocks = score_blocks(clustering, truth, blocks.index);
      auto ids = truth.mention_ids();
      if (!ids.empty()) r.bcubed = bcubed_prf(clustering, truth, ids);
      r.match_stats = truth.match_stats;
      r.labeled_mentions = truth.truth.size();
      r.distinct_authors = truth.distinct_authors();
    }
    if (!blocks.corpus_sizes.empty()) {
      for (auto& b : r.blocks) b.block_size = blocks.corpus_sizes.at(b.block_key);
    }
    r.aggregate = aggregate_scores(r.blocks, config.sd);
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    r.blocks.clear();
  }
  return r;
}

}  // namespace

EvaluationReport evaluate(const PipelineConfig& config, const PipelineInputs& inputs,
                          const LabeledFamilies& labels,
                          const std::map<std::string, Clustering>& clusterings) {
  EvaluationReport report;
  report.config_echo = config.to_json();

  std::optional<BlockIndex> corpus_blocks;
  if (config.corpus_wide_blocking) {
    corpus_blocks = build_blocks(mention_refs(inputs.corpus), KeyScheme::first_initial);
  }

  std::map<std::string, FamilyBlocks> blocks;
  for (const auto& family : config.families) {
    std::vector<MentionId> universe;
    if (family == "selfcite") {
      universe = labels.selfcite->mention_ids();
    } else {
      universe = labels.matched.at(family).mention_ids();
    }
    blocks.emplace(family, family_blocks(config, inputs, universe,
                                         corpus_blocks ? &*corpus_blocks : nullptr));
  }

  struct Job {
    const std::string* family;
    const std::string* method;
  };
  std::vector<Job> jobs;
  for (const auto& family : config.families) {
    for (const auto& method : config.disambiguators) jobs.push_back({&family, &method});
  }
  report.results.resize(jobs.size());
  auto run = [&](std::size_t i) {
    const auto& job = jobs[i];
    report.results[i] = evaluate_one(config, *job.family, *job.method, labels,
                                     blocks.at(*job.family), clusterings.at(*job.method));
  };
  const std::size_t threads = std::max(1u, config.threads);
  for (std::size_t start = 0; start < jobs.size(); start += threads) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(jobs.size(), start + threads); ++i) {
      batch.push_back(std::async(threads == 1 ? std::launch::deferred : std::launch::async, run, i));
    }
    for (auto& f : batch) f.get();
  }
  return report;
}

EvaluationReport run_pipeline(const PipelineConfig& config, const ProgressSink& progress) {
  config.validate();
  auto inputs = load_inputs(config, progress);
  auto labels = build_labels(config, inputs);
  auto universe = labels.universe();
  auto clusterings = build_clusterings(config, inputs, universe);
  return evaluate(config, inputs, labels, clusterings);
}

bool EvaluationReport::all_ok() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.ok; });
}

// ---------------------------------------------------------------------------
// Report serialization

namespace {

ojson summary_to_json(const MetricSummary& m) {
  return {{"mean", optional_number(m.mean)},
          {"sd", optional_number(m.sd)},
          {"blocks_scored", m.blocks_scored},
          {"blocks_excluded", m.blocks_excluded}};
}

MetricSummary summary_from_json(const ojson& j) {
  return {number_or_null(j.at("mean")), number_or_null(j.at("sd")),
          j.at("blocks_scored").get<std::size_t>(), j.at("blocks_excluded").get<std::size_t>()};
}

}  // namespace

ojson to_json(const EvaluationReport& report) {
  ojson j;
  j["toolkit_version"] = report.toolkit_version;
  j["config"] = report.config_echo;
  auto& results = j["results"] = ojson::array();
  for (const auto& r : report.results) {
    ojson rj;
    rj["family"] = r.family;
    rj["method"] = r.method;
    rj["ok"] = r.ok;
    rj["error"] = r.error;
    rj["primary_metric"] = r.primary_metric;
    rj["labeled_mentions"] = r.labeled_mentions;
    rj["distinct_authors"] = r.distinct_authors;
    rj["labeled_pairs"] = r.labeled_pairs;
    if (r.match_stats) {
      const auto& s = *r.match_stats;
      rj["match_stats"] = {{"entries_in", s.entries_in},
                           {"entries_matched", s.entries_matched},
                           {"entries_unmatched", s.entries_unmatched},
                           {"ambiguous_count", s.ambiguous_count},
                           {"conflicts", s.conflicts},
                           {"match_ratio", s.match_ratio()}};
    } else {
      rj["match_stats"] = nullptr;
    }
    const auto& a = r.aggregate;
    ojson strata = ojson::array();
    for (const auto& s : a.per_size_strata) {
      strata.push_back({{"block_size", s.block_size},
                        {"block_count", s.block_count},
                        {"mean_precision", optional_number(s.mean_precision)},
                        {"mean_recall", optional_number(s.mean_recall)},
                        {"mean_f1", optional_number(s.mean_f1)}});
    }
    rj["aggregate"] = {{"total_blocks", a.total_blocks},
                       {"precision", summary_to_json(a.precision)},
                       {"recall", summary_to_json(a.recall)},
                       {"f1", summary_to_json(a.f1)},
                       {"per_size_strata", std::move(strata)}};
    if (r.bcubed) {
      rj["bcubed"] = {{"precision", r.bcubed->precision},
                      {"recall", r.bcubed->recall},
                      {"f1", r.bcubed->f1}};
    } else {
      rj["bcubed"] = nullptr;
    }
    ojson dist = ojson::array();
    for (const auto& row : r.distribution.rows) {
      dist.push_back({{"block_size", row.block_size},
                      {"block_count", row.block_count},
                      {"cumulative_ratio", row.cumulative_ratio}});
    }
    rj["distribution"] = std::move(dist);
    ojson blocks = ojson::array();
    for (const auto& b : r.blocks) {
      blocks.push_back({{"block_key", b.block_key},
                        {"block_size", b.block_size},
                        {"precision", optional_number(b.precision)},
                        {"recall", optional_number(b.recall)},
                        {"f1", optional_number(b.f1)},
                        {"predicted_pairs", b.pairs.predicted},
                        {"truth_pairs", b.pairs.truth},
                        {"intersection_pairs", b.pairs.intersection}});
    }
    rj["blocks"] = std::move(blocks);
    results.push_back(std::move(rj));
  }
  return j;
}

EvaluationReport report_from_json(const nlohmann::ordered_json& j) {
  EvaluationReport report;
  report.toolkit_version = j.at("toolkit_version").get<std::string>();
  report.config_echo = j.at("config");
  for (const auto& rj : j.at("results")) {
    CombinationResult r;
    r.family = rj.at("family").get<std::string>();
    r.method = rj.at("method").get<std::string>();
    r.ok = rj.at("ok").get<bool>();
    r.error = rj.at("error").get<std::string>();
    r.primary_metric = rj.at("primary_metric").get<std::string>();
    r.labeled_mentions = rj.at("labeled_mentions").get<std::size_t>();
    r.distinct_authors = rj.at("distinct_authors").get<std::size_t>();
    r.labeled_pairs = rj.at("labeled_pairs").get<std::size_t>();
    if (!rj.at("match_stats").is_null()) {
      const auto& s = rj["match_stats"];
      r.match_stats = MatchStats{s.at("entries_in").get<std::size_t>(),
                                 s.at("entries_matched").get<std::size_t>(),
                                 s.at("entries_unmatched").get<std::size_t>(),
                                 s.at("ambiguous_count").get<std::size_t>(),
                                 s.at("conflicts").get<std::size_t>()};
    }
    const auto& a = rj.at("aggregate");
    r.aggregate.total_blocks = a.at("total_blocks").get<std::size_t>();
    r.aggregate.precision = summary_from_json(a.at("precision"));
    r.aggregate.recall = summary_from_json(a.at("recall"));
    r.aggregate.f1 = summary_from_json(a.at("f1"));
    for (const auto& s : a.at("per_size_strata")) {
      r.aggregate.per_size_strata.push_back(
          {s.at("block_size").get<std::size_t>(), s.at("block_count").get<std::size_t>(),
           number_or_null(s.at("mean_precision")), number_or_null(s.at("mean_recall")),
           number_or_null(s.at("mean_f1"))});
    }
    if (!rj.at("bcubed").is_null()) {
      const auto& b = rj["bcubed"];
      r.bcubed = BCubedScore{b.at("precision").get<double>(), b.at("recall").get<double>(),
                             b.at("f1").get<double>()};
    }
    for (const auto& row : rj.at("distribution")) {
      r.distribution.rows.push_back({row.at("block_size").get<std::size_t>(),
                                     row.at("block_count").get<std::size_t>(),
                                     row.at("cumulative_ratio").get<double>()});
    }
    for (const auto& b : rj.at("blocks")) {
      BlockScore s;
      s.block_key = b.at("block_key").get<std::string>();
      s.block_size = b.at("block_size").get<std::size_t>();
      s.precision = number_or_null(b.at("precision"));
      s.recall = number_or_null(b.at("recall"));
      s.f1 = number_or_null(b.at("f1"));
      s.pairs = {b.at("predicted_pairs").get<std::uint64_t>(), b.at("truth_pairs").get<std::uint64_t>(),
                 b.at("intersection_pairs").get<std::uint64_t>()};
      r.blocks.push_back(std::move(s));
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Emitters

namespace {

std::string cell(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  auto len = utf8::length(s);
  return len >= width ? s : s + std::string(width - len, ' ');
}

std::optional<double> stratum_metric(const Stratum& s, const std::string& metric) {
  if (metric == "precision") return s.mean_precision;
  if (metric == "recall") return s.mean_recall;
  return s.mean_f1;
}

}  // namespace

std::string summary_table(const EvaluationReport& report) {
  const std::vector<std::string> header = {"dataset", "method", "mean_P", "sd_P", "mean_R", "sd_R",
                                           "mean_F1", "sd_F1", "scored_P", "excluded_P", "scored_R",
                                           "excluded_R", "scored_F1", "excluded_F1"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.results) {
    if (!r.ok) {
      rows.push_back({r.family, r.method, "FAILED: " + r.error});
      continue;
    }
    const auto& a = r.aggregate;
    rows.push_back({r.family, r.method, cell(a.precision.mean), cell(a.precision.sd),
                    cell(a.recall.mean), cell(a.recall.sd), cell(a.f1.mean), cell(a.f1.sd),
                    std::to_string(a.precision.blocks_scored),
                    std::to_string(a.precision.blocks_excluded),
                    std::to_string(a.recall.blocks_scored), std::to_string(a.recall.blocks_excluded),
                    std::to_string(a.f1.blocks_scored), std::to_string(a.f1.blocks_excluded)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    if (row.size() != header.size()) continue;
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], utf8::length(row[c]));
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += (c + 1 == row.size()) ? row[c] : pad(row[c], width[c]);
    }
    out << line << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out.str();
}

void emit_report(const EvaluationReport& report, const std::set<std::string>& formats,
                 const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  if (formats.count("summary_table")) {
    auto path = out_dir / "summary.txt";
    auto out = open_output(path);
    out << summary_table(report);
    finish_output(out, path);
  }
  if (formats.count("per_block_csv")) {
    auto path = out_dir / "per_block.csv";
    auto out = open_output(path);
    csv::write_row(out, {"dataset", "method", "block_key", "block_size", "predicted_pairs",
                         "truth_pairs", "intersection_pairs", "precision", "recall", "f1"});
    for (const auto& r : report.results) {
      for (const auto& b : r.blocks) {
        csv::write_row(out, {r.family, r.method, b.block_key, std::to_string(b.block_size),
                             std::to_string(b.pairs.predicted), std::to_string(b.pairs.truth),
                             std::to_string(b.pairs.intersection), csv::format_value(b.precision),
                             csv::format_value(b.recall), csv::format_value(b.f1)});
      }
    }
    finish_output(out, path);
  }
  if (formats.count("figure_data_csv")) {
    auto path = out_dir / "figure_data.csv";
    auto out = open_output(path);
    csv::write_row(out, {"dataset", "method", "metric", "block_size", "mean_metric", "block_count",
                         "cumulative_ratio"});
    for (const auto& r : report.results) {
      if (!r.ok) continue;
      for (const auto& s : r.aggregate.per_size_strata) {
        csv::write_row(out, {r.family, r.method, r.primary_metric, std::to_string(s.block_size),
                             csv::format_value(stratum_metric(s, r.primary_metric)),
                             std::to_string(s.block_count),
                             csv::format_value(r.distribution.cumulative_at(s.block_size))});
      }
    }
    finish_output(out, path);
  }
  if (formats.count("json")) {
    auto path = out_dir / "report.json";
    auto out = open_output(path);
    out << to_json(report).dump(2) << '\n';
    finish_output(out, path);
  }
}

void write_labels(const LabeledFamilies& labels, const fs::path& out_dir) {
  fs::create_directories(out_dir / "labels");
  for (const auto& [family, truth] : labels.matched) {
    auto path = out_dir / "labels" / (file_safe(family) + ".csv");
    auto out = open_output(path);
    write_labels_csv(truth, out);
    finish_output(out, path);
  }
  for (const auto& [family, report] : labels.ambiguity) {
    auto path = out_dir / "labels" / (file_safe(family) + ".ambiguity.jsonl");
    auto out = open_output(path);
    write_ambiguity_jsonl(report, out);
    finish_output(out, path);
  }
  if (labels.selfcite) {
    auto path = out_dir / "labels" / "selfcite.pairs.csv";
    auto out = open_output(path);
    write_pairs_csv(*labels.selfcite, out);
    finish_output(out, path);
  }
}

void write_clusterings(const std::map<std::string, Clustering>& clusterings, const fs::path& out_dir) {
  fs::create_directories(out_dir / "clusterings");
  for (const auto& [method, clustering] : clusterings) {
    auto path = out_dir / "clusterings" / (method + ".csv");
    auto out = open_output(path);
    write_clustering_csv(clustering, out);
    finish_output(out, path);
  }
}

}  // namespace andbench
