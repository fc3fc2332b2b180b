// graphsim: pipeline driver. Each subcommand runs one stage over the output
// directory named by the config; every stage is idempotent, so rerunning
// verifies existing artifacts instead of recomputing them.
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "graphsim/analysis.hpp"
#include "graphsim/errors.hpp"
#include "graphsim/experiment.hpp"
#include "graphsim/rater.hpp"
#include "graphsim/run_config.hpp"
#include "graphsim/util.hpp"

namespace {

using namespace graphsim;

int g_verbosity = 1;

void logf(int level, const char* fmt, ...) {
  if (g_verbosity < level) return;
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stdout, fmt, args);
  va_end(args);
  std::fputc('\n', stdout);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct StageOptions {
  int jobs = 0;
  bool dry_run = false;
  std::string rater = "mock";
  bool confirm_cost = false;
  int max_pairs = -1;
};

int corpus_size(const RunConfig& c) {
  return static_cast<int>(c.generators.size() * c.grid.size_classes.size() *
                          c.grid.density_classes.size() * c.instances_per_cell);
}

long long expected_pairs(const RunConfig& c) {
  long long strata =
      static_cast<long long>(c.grid.size_classes.size()) * c.grid.density_classes.size();
  long long per_stratum = static_cast<long long>(c.generators.size()) * c.instances_per_cell;
  if (c.pairing == PairingPolicy::within_stratum)
    return strata * per_stratum * (per_stratum - 1) / 2;
  long long total = strata * per_stratum;
  return total * (total - 1) / 2;
}

void stage_generate(const RunConfig& config, const StageOptions& opts, const char* verb) {
  if (opts.dry_run) {
    logf(1, "[%s] would build or verify %d graphs (with images and feature profiles) under %s",
         verb, corpus_size(config), config.output_dir.string().c_str());
    return;
  }
  auto t0 = std::chrono::steady_clock::now();
  BuildReport report;
  DatasetManifest manifest = build_dataset(config, opts.jobs, &report);
  logf(1, "[%s] corpus ready: %zu graphs (%d built, %d verified) in %.1fs", verb,
       manifest.entries.size(), report.generated, report.verified, seconds_since(t0));
}

void stage_measure(const RunConfig& config, const StageOptions& opts) {
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  if (opts.dry_run) {
    if (std::filesystem::exists(paths.manifest_file)) {
      DatasetManifest manifest = load_manifest(paths.manifest_file);
      auto pairs = enumerate_pairs(manifest, config.pairing);
      RecordStore store(paths.records_jsonl);
      long long todo = 0;
      for (const PairRef& p : pairs)
        if (!store.find(p.pair_id)) ++todo;
      logf(1, "[measure] would compute %lld of %zu pairs (%zu already recorded)", todo,
           pairs.size(), store.size());
    } else {
      logf(1, "[measure] would compute %lld pairs once the corpus is built",
           expected_pairs(config));
    }
    return;
  }
  auto t0 = std::chrono::steady_clock::now();
  DatasetManifest manifest = load_manifest(paths.manifest_file);
  auto pairs = enumerate_pairs(manifest, config.pairing);
  RecordStore store(paths.records_jsonl);
  if (store.recovered_torn_line())
    logf(1, "[measure] dropped a torn trailing record line left by an interrupted run");
  MeasureRunStats stats = run_measures(manifest, pairs, config, store, opts.jobs);
  export_records_csv(store, paths.records_csv);
  logf(1, "[measure] %d computed, %d skipped, %d failed (of %zu pairs) in %.1fs",
       stats.computed, stats.skipped, stats.failed, pairs.size(), seconds_since(t0));
}

void stage_rate(const RunConfig& config, const StageOptions& opts) {
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  if (opts.dry_run) {
    long long candidates = 0;
    if (std::filesystem::exists(paths.manifest_file)) {
      DatasetManifest manifest = load_manifest(paths.manifest_file);
      auto pairs = enumerate_pairs(manifest, config.pairing);
      RecordStore store(paths.records_jsonl);
      for (const PairRef& p : pairs) {
        const SimilarityRecord* r = store.find(p.pair_id);
        if (r && r->status == "measured") ++candidates;
      }
    } else {
      candidates = expected_pairs(config);
    }
    if (opts.max_pairs >= 0 && candidates > opts.max_pairs) candidates = opts.max_pairs;
    logf(1, "[rate] would rate %lld pairs with the %s rater", candidates, opts.rater.c_str());
    if (opts.rater == "live")
      logf(1, "[rate] estimated cost: %.2f USD (%.4f USD/pair)",
           candidates * config.cost_per_pair_usd, config.cost_per_pair_usd);
    return;
  }
  auto t0 = std::chrono::steady_clock::now();
  DatasetManifest manifest = load_manifest(paths.manifest_file);
  auto pairs = enumerate_pairs(manifest, config.pairing);
  RecordStore store(paths.records_jsonl);
  if (store.recovered_torn_line())
    logf(1, "[rate] dropped a torn trailing record line left by an interrupted run");

  long long candidates = 0;
  for (const PairRef& p : pairs) {
    const SimilarityRecord* r = store.find(p.pair_id);
    if (r && r->status == "measured") ++candidates;
  }
  if (opts.max_pairs >= 0 && candidates > opts.max_pairs) candidates = opts.max_pairs;

  std::unique_ptr<Rater> rater;
  if (opts.rater == "mock") {
    rater = std::make_unique<MockRater>();
  } else {
    logf(1, "[rate] live run: %lld pairs, estimated cost %.2f USD (%.4f USD/pair)",
         candidates, candidates * config.cost_per_pair_usd, config.cost_per_pair_usd);
    if (!opts.confirm_cost)
      throw ConfigError("live rating spends money; rerun with --confirm-cost to proceed");
    rater = make_live_rater(config.rater);
  }
  RatingRunStats stats =
      run_ratings(manifest, pairs, *rater, config, store, opts.jobs, opts.max_pairs);
  export_records_csv(store, paths.records_csv);
  logf(1, "[rate] %d rated, %d skipped, %d failed (of %zu pairs) in %.1fs", stats.rated,
       stats.skipped, stats.failed, pairs.size(), seconds_since(t0));
}

CorrelationTable load_table(const RunConfig& config) {
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  RecordStore store(paths.records_jsonl);
  return correlation_table(store.snapshot(), config.grid);
}

void stage_correlate(const RunConfig& config, const StageOptions& opts) {
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  if (opts.dry_run) {
    logf(1, "[correlate] would write %s",
         (paths.report_dir / "correlations.csv").string().c_str());
    return;
  }
  CorrelationTable table = load_table(config);
  std::filesystem::create_directories(paths.report_dir);
  write_file_atomic(paths.report_dir / "correlations.csv", correlations_csv(table));
  int defined = 0;
  for (const CorrelationCell& c : table.cells)
    if (c.r.has_value()) ++defined;
  logf(1, "[correlate] %zu cells (%d defined) -> %s", table.cells.size(), defined,
       (paths.report_dir / "correlations.csv").string().c_str());
}

void stage_report(const RunConfig& config, const StageOptions& opts) {
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  if (opts.dry_run) {
    logf(1, "[report] would write correlations.csv, heatmap.svg, findings.md under %s",
         paths.report_dir.string().c_str());
    return;
  }
  CorrelationTable table = load_table(config);
  emit_report(table, paths.report_dir);
  logf(1, "[report] wrote correlations.csv, heatmap.svg, findings.md under %s",
       paths.report_dir.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph similarity benchmark pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  StageOptions opts;
  app.add_option("--config", config_path, "JSON run configuration (defaults apply if omitted)");
  app.add_option("--jobs", opts.jobs, "worker threads, 0 = all hardware threads");
  app.add_flag("--dry-run", opts.dry_run, "print the plan without writing anything");

  CLI::App* cmd_generate =
      app.add_subcommand("generate", "build graphs, layouts, images, features, and the manifest");
  CLI::App* cmd_render =
      app.add_subcommand("render", "verify or rebuild the corpus artifacts (alias stage)");
  CLI::App* cmd_measure =
      app.add_subcommand("measure", "compute the six similarity measures for every pair");
  CLI::App* cmd_rate = app.add_subcommand("rate", "collect rater scores for measured pairs");
  CLI::App* cmd_correlate =
      app.add_subcommand("correlate", "compute the stratified correlation table CSV");
  CLI::App* cmd_report = app.add_subcommand("report", "emit CSV, heatmap, and findings files");
  CLI::App* cmd_run_all = app.add_subcommand("run-all", "run every stage in order");

  for (CLI::App* c : {cmd_rate, cmd_run_all}) {
    c->add_option("--rater", opts.rater, "mock|live")
        ->check(CLI::IsMember({"mock", "live"}));
    c->add_flag("--confirm-cost", opts.confirm_cost,
                "acknowledge the estimated cost of a live run");
    c->add_option("--max-pairs", opts.max_pairs, "cap on pairs to rate this run (-1 = all)");
  }
  for (CLI::App* c : {cmd_generate, cmd_render, cmd_measure, cmd_rate, cmd_correlate,
                      cmd_report, cmd_run_all})
    c->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    config.validate();
    g_verbosity = config.verbosity;

    if (stage == "generate") {
      stage_generate(config, opts, "generate");
    } else if (stage == "render") {
      stage_generate(config, opts, "render");
    } else if (stage == "measure") {
      stage_measure(config, opts);
    } else if (stage == "rate") {
      stage_rate(config, opts);
    } else if (stage == "correlate") {
      stage_correlate(config, opts);
    } else if (stage == "report") {
      stage_report(config, opts);
    } else if (stage == "run-all") {
      stage_generate(config, opts, "generate");
      stage_measure(config, opts);
      stage_rate(config, opts);
      stage_correlate(config, opts);
      stage_report(config, opts);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s: config error: %s\n", stage.c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: stage failed: %s\n", stage.c_str(), e.what());
    return 1;
  }
}
