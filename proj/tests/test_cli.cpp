#include <doctest.h>

#include <cstdlib>
#include <string>

#include "graphsim/run_config.hpp"
#include "graphsim/util.hpp"
#include "support/testutil.hpp"

using namespace graphsim;
using graphsim::testing::TempDir;
using graphsim::testing::tiny_config;

namespace {

#ifndef GRAPHSIM_CLI_PATH
#error "GRAPHSIM_CLI_PATH must point at the pipeline executable"
#endif

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// run the pipeline binary with stdout/stderr captured to files
CliResult run_cli(const std::string& args, const std::filesystem::path& scratch,
                  const std::string& env_prefix = "") {
  const auto out_path = scratch / "cli-stdout.txt";
  const auto err_path = scratch / "cli-stderr.txt";
  std::string cmd = env_prefix + " \"" + GRAPHSIM_CLI_PATH + "\" " + args + " > \"" +
                    out_path.string() + "\" 2> \"" + err_path.string() + "\"";
  int status = std::system(cmd.c_str());

  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (std::filesystem::exists(out_path)) r.out = read_file(out_path);
  if (std::filesystem::exists(err_path)) r.err = read_file(err_path);
  return r;
}

// a tiny-corpus config written to disk, plus the paths the stages use
struct CliFixture {
  TempDir tmp{"cli"};
  std::filesystem::path config_file = tmp.path() / "config.json";
  std::filesystem::path out_dir = tmp.path() / "out";

  explicit CliFixture(int verbosity = 1) {
    RunConfig c = tiny_config(out_dir);
    c.verbosity = verbosity;
    write_file_atomic(config_file, run_config_to_json(c));
  }

  std::string args(const std::string& rest) const {
    return "--config \"" + config_file.string() + "\" " + rest;
  }
  CliResult run(const std::string& rest, const std::string& env_prefix = "") const {
    return run_cli(args(rest), tmp.path(), env_prefix);
  }
};

}  // namespace

TEST_CASE("cli rejects bad invocations with exit code 2") {
  TempDir tmp("cli-args");
  CHECK(run_cli("", tmp.path()).exit_code == 2);               // subcommand required
  CHECK(run_cli("frobnicate", tmp.path()).exit_code == 2);     // unknown subcommand
  CHECK(run_cli("generate --nope", tmp.path()).exit_code == 2);
  CHECK(run_cli("rate --rater bogus", tmp.path()).exit_code == 2);

  CliResult help = run_cli("--help", tmp.path());
  CHECK(help.exit_code == 0);
  for (const char* name : {"generate", "measure", "rate", "correlate", "report", "run-all"})
    CHECK(help.out.find(name) != std::string::npos);
}

TEST_CASE("cli maps config problems to exit code 2") {
  TempDir tmp("cli-config");
  CliResult missing = run_cli("--config /no/such/config.json generate", tmp.path());
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("config error") != std::string::npos);

  auto bad_file = tmp.path() / "bad.json";
  write_file_atomic(bad_file, std::string(R"({"version": 1, "surprise": true})"));
  CliResult unknown_key = run_cli("--config \"" + bad_file.string() + "\" generate", tmp.path());
  CHECK(unknown_key.exit_code == 2);
  CHECK(unknown_key.err.find("config error") != std::string::npos);
}

TEST_CASE("dry runs describe the plan and write nothing") {
  CliFixture fx;

  CliResult gen = fx.run("generate --dry-run");
  CHECK(gen.exit_code == 0);
  CHECK(gen.out.find("would build or verify 48 graphs") != std::string::npos);

  CliResult measure = fx.run("measure --dry-run");
  CHECK(measure.exit_code == 0);
  CHECK(measure.out.find("would compute 72 pairs") != std::string::npos);

  CliResult rate = fx.run("rate --dry-run --rater live");
  CHECK(rate.exit_code == 0);
  CHECK(rate.out.find("would rate 72 pairs with the live rater") != std::string::npos);
  CHECK(rate.out.find("estimated cost") != std::string::npos);

  CliResult all = fx.run("run-all --dry-run");
  CHECK(all.exit_code == 0);

  CHECK_FALSE(std::filesystem::exists(fx.out_dir));
}

TEST_CASE("pipeline stages run in sequence and are idempotent") {
  CliFixture fx;

  CliResult gen = fx.run("generate --jobs 2");
  CHECK(gen.exit_code == 0);
  CHECK(gen.out.find("48 graphs (48 built, 0 verified)") != std::string::npos);
  CHECK(std::filesystem::exists(fx.out_dir / "manifest.json"));

  CliResult regen = fx.run("generate --jobs 2");
  CHECK(regen.exit_code == 0);
  CHECK(regen.out.find("(0 built, 48 verified)") != std::string::npos);

  CliResult render = fx.run("render --jobs 2");
  CHECK(render.exit_code == 0);
  CHECK(render.out.find("[render]") != std::string::npos);

  CliResult measure = fx.run("measure --jobs 2");
  CHECK(measure.exit_code == 0);
  CHECK(measure.out.find("72 computed, 0 skipped, 0 failed") != std::string::npos);
  CHECK(std::filesystem::exists(fx.out_dir / "records.jsonl"));
  CHECK(std::filesystem::exists(fx.out_dir / "records.csv"));

  CliResult remeasure = fx.run("measure --jobs 2");
  CHECK(remeasure.out.find("0 computed, 72 skipped") != std::string::npos);

  CliResult rate = fx.run("rate --jobs 2");
  CHECK(rate.exit_code == 0);
  CHECK(rate.out.find("72 rated, 0 skipped, 0 failed") != std::string::npos);
  CHECK(read_file(fx.out_dir / "records.csv").find(",mock,1,rated,") != std::string::npos);

  CliResult correlate = fx.run("correlate");
  CHECK(correlate.exit_code == 0);
  CHECK(std::filesystem::exists(fx.out_dir / "report/correlations.csv"));
  CHECK_FALSE(std::filesystem::exists(fx.out_dir / "report/heatmap.svg"));
  CHECK(correlate.out.find("72 cells") != std::string::npos);

  CliResult report = fx.run("report");
  CHECK(report.exit_code == 0);
  CHECK(std::filesystem::exists(fx.out_dir / "report/heatmap.svg"));
  CHECK(std::filesystem::exists(fx.out_dir / "report/findings.md"));
}

TEST_CASE("stage failures surface as exit code 1") {
  CliFixture fx;
  // measuring before the corpus exists cannot work
  CliResult measure = fx.run("measure");
  CHECK(measure.exit_code == 1);
  CHECK(measure.err.find("stage failed") != std::string::npos);
}

TEST_CASE("live rating is gated on cost confirmation, then on the credential") {
  CliFixture fx;
  REQUIRE(fx.run("generate").exit_code == 0);
  REQUIRE(fx.run("measure").exit_code == 0);

  CliResult unconfirmed = fx.run("rate --rater live", "env -u GRAPHSIM_API_KEY");
  CHECK(unconfirmed.exit_code == 2);
  CHECK(unconfirmed.out.find("live run: 72 pairs, estimated cost") != std::string::npos);
  CHECK(unconfirmed.err.find("--confirm-cost") != std::string::npos);

  CliResult no_key = fx.run("rate --rater live --confirm-cost", "env -u GRAPHSIM_API_KEY");
  CHECK(no_key.exit_code == 2);
  CHECK(no_key.err.find("GRAPHSIM_API_KEY") != std::string::npos);

  // nothing got rated along the way
  CliResult still_measured = fx.run("rate --dry-run");
  CHECK(still_measured.out.find("would rate 72 pairs") != std::string::npos);
}

TEST_CASE("run-all drives the whole pipeline in one call") {
  CliFixture fx;
  CliResult all = fx.run("run-all --jobs 2");
  CHECK(all.exit_code == 0);
  for (const char* rel : {"manifest.json", "records.jsonl", "records.csv",
                          "report/correlations.csv", "report/heatmap.svg",
                          "report/findings.md"}) {
    CAPTURE(rel);
    CHECK(std::filesystem::exists(fx.out_dir / rel));
  }
  // global options may come before or after the subcommand
  CliResult again = run_cli("run-all --config \"" + fx.config_file.string() + "\"",
                            fx.tmp.path());
  CHECK(again.exit_code == 0);
  CHECK(again.out.find("(0 built, 48 verified)") != std::string::npos);
}

TEST_CASE("verbosity zero silences routine output") {
  CliFixture fx(0);
  CliResult gen = fx.run("generate");
  CHECK(gen.exit_code == 0);
  CHECK(gen.out.empty());
}
