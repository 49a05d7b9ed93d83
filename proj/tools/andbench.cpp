// andbench: evaluate author name disambiguation on a DBLP-style corpus.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "andbench/error.hpp"
#include "andbench/io.hpp"
#include "andbench/pipeline.hpp"

namespace fs = std::filesystem;
using namespace andbench;

namespace {

constexpr int kExitCombinationFailed = 1;
constexpr int kExitFatal = 2;

struct GlobalOptions {
  std::string config;
  std::string out;
  unsigned threads = 0;
  std::uint64_t seed = 0;  // reserved: no step is randomized
};

void print_error(const std::string& kind, const std::string& message,
                 std::optional<std::uint64_t> offset = std::nullopt) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (offset) j["offset"] = *offset;
  std::cerr << j.dump() << '\n';
}

PipelineConfig resolve_config(const GlobalOptions& g) {
  std::string path = g.config;
  if (path.empty()) {
    if (const char* env = std::getenv("ANDBENCH_CONFIG")) path = env;
  }
  if (path.empty()) throw ConfigError("no config: pass --config or set ANDBENCH_CONFIG");
  auto config = load_config(path);
  if (!g.out.empty()) config.output_dir = g.out;
  if (g.threads) config.threads = g.threads;
  return config;
}

ProgressSink stderr_progress() {
  return [](const std::string& msg) { std::cerr << "[andbench] " << msg << '\n'; };
}

void write_json_file(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

int cmd_ingest(const GlobalOptions& g) {
  auto config = resolve_config(g);
  if (config.dump.empty() || !fs::exists(config.dump)) {
    throw ConfigError("dump not found: " + config.dump.string());
  }
  PipelineConfig only_dump = config;
  only_dump.families.clear();
  auto inputs = load_inputs(only_dump, stderr_progress());
  fs::create_directories(config.output_dir);
  {
    std::ofstream out(config.output_dir / "corpus.jsonl", std::ios::binary);
    write_corpus_jsonl(inputs.corpus, out);
  }
  {
    std::ofstream out(config.output_dir / "mentions.csv", std::ios::binary);
    write_mentions_csv(inputs.corpus, out);
  }
  const auto& s = inputs.corpus.stats();
  nlohmann::ordered_json stats = {{"records_read", s.records_read},
                                  {"records_kept", s.records_kept},
                                  {"records_dropped", s.records_dropped()},
                                  {"dropped_by_type", s.dropped_by_type},
                                  {"unknown_kinds", s.unknown_kinds},
                                  {"mentions", inputs.corpus.mentions().size()}};
  write_json_file(config.output_dir / "ingest_stats.json", stats);
  std::cout << stats.dump() << '\n';
  return 0;
}

int cmd_label(const GlobalOptions& g) {
  auto config = resolve_config(g);
  config.validate();
  auto inputs = load_inputs(config, stderr_progress());
  auto labels = build_labels(config, inputs);
  write_labels(labels, config.output_dir);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [family, truth] : labels.matched) {
    summary[family] = {{"mentions", truth.truth.size()},
                       {"distinct_authors", truth.distinct_authors()},
                       {"entries_in", truth.match_stats.entries_in},
                       {"matched", truth.match_stats.entries_matched},
                       {"ambiguous", truth.match_stats.ambiguous_count},
                       {"match_ratio", truth.match_stats.match_ratio()}};
  }
  if (labels.selfcite) {
    summary["selfcite"] = {{"pairs", labels.selfcite->pairs.size()},
                           {"edges_used", labels.selfcite->edges_used},
                           {"edges_unresolved", labels.selfcite->edges_unresolved}};
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_disambiguate(const GlobalOptions& g) {
  auto config = resolve_config(g);
  config.validate();
  auto inputs = load_inputs(config, stderr_progress());
  auto labels = build_labels(config, inputs);
  auto universe = labels.universe();
  auto clusterings = build_clusterings(config, inputs, universe);
  write_clusterings(clusterings, config.output_dir);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [method, c] : clusterings) {
    summary[method] = {{"mentions", c.size()}, {"clusters", c.cluster_count()}};
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

int finish_report(const EvaluationReport& report, const std::set<std::string>& formats,
                  const fs::path& out_dir) {
  emit_report(report, formats, out_dir);
  std::cout << summary_table(report);
  for (const auto& r : report.results) {
    if (!r.ok) print_error("combination_failed", r.family + " x " + r.method + ": " + r.error);
  }
  return report.all_ok() ? 0 : kExitCombinationFailed;
}

int cmd_evaluate(const GlobalOptions& g) {
  auto config = resolve_config(g);
  auto report = run_pipeline(config, stderr_progress());
  return finish_report(report, {"json", "per_block_csv"}, config.output_dir);
}

int cmd_report(const GlobalOptions& g, const std::string& report_path,
               const std::vector<std::string>& formats) {
  fs::path out_dir = g.out;
  fs::path path = report_path;
  std::set<std::string> wanted(formats.begin(), formats.end());
  if (path.empty() || out_dir.empty() || wanted.empty()) {
    auto config = resolve_config(g);
    if (out_dir.empty()) out_dir = config.output_dir;
    if (wanted.empty()) wanted = config.formats;
  }
  if (path.empty()) path = out_dir / "report.json";
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read report " + path.string());
  auto report = report_from_json(nlohmann::ordered_json::parse(in));
  return finish_report(report, wanted, out_dir);
}

int cmd_run(const GlobalOptions& g) {
  auto config = resolve_config(g);
  config.validate();
  auto progress = stderr_progress();
  auto inputs = load_inputs(config, progress);
  auto labels = build_labels(config, inputs);
  auto universe = labels.universe();
  progress("labels: " + std::to_string(universe.size()) + " labeled mentions");
  auto clusterings = build_clusterings(config, inputs, universe);
  auto report = evaluate(config, inputs, labels, clusterings);
  write_labels(labels, config.output_dir);
  write_clusterings(clusterings, config.output_dir);
  return finish_report(report, config.formats, config.output_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"andbench: author name disambiguation evaluation toolkit"};
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config, "Pipeline config file (default: $ANDBENCH_CONFIG)");
  app.add_option("--out", g.out, "Output directory (overrides output_dir)");
  app.add_option("--threads", g.threads, "Concurrent evaluation jobs")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Reserved; no step is randomized");

  auto* ingest = app.add_subcommand("ingest", "Parse the dump; write corpus.jsonl, mentions.csv, ingest_stats.json");
  auto* label = app.add_subcommand("label", "Build labeled data; write labels/");
  auto* disambiguate = app.add_subcommand("disambiguate", "Cluster labeled mentions; write clusterings/");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score every combination; write report.json, per_block.csv");
  auto* report = app.add_subcommand("report", "Render report formats from an existing report.json");
  auto* run = app.add_subcommand("run", "Full pipeline");

  std::string report_path;
  std::vector<std::string> formats;
  report->add_option("--report", report_path, "report.json to render (default: <out>/report.json)");
  report->add_option("--format", formats, "summary_table, per_block_csv, figure_data_csv, json")
      ->check(CLI::IsMember({"summary_table", "per_block_csv", "figure_data_csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(g);
    if (*label) return cmd_label(g);
    if (*disambiguate) return cmd_disambiguate(g);
    if (*evaluate_cmd) return cmd_evaluate(g);
    if (*report) return cmd_report(g, report_path, formats);
    if (*run) return cmd_run(g);
  } catch (const IngestError& e) {
    print_error("ingest", e.what(), e.offset());
    return kExitFatal;
  } catch (const ConfigError& e) {
    print_error("config", e.what());
    return kExitFatal;
  } catch (const std::exception& e) {
    print_error("fatal", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}
