// Experiment configuration: one JSON file drives every pipeline stage.
// Strictly validated — unknown keys are rejected and a version field is
// required, so a typo cannot silently change an experiment.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graphsim/generators.hpp"
#include "graphsim/rater.hpp"
#include "graphsim/render.hpp"
#include "graphsim/similarity.hpp"

namespace graphsim {

enum class PairingPolicy { within_stratum, all_pairs };
std::string to_string(PairingPolicy p);
PairingPolicy pairing_from_string(const std::string& s);

struct RunConfig {
  int version = 1;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  int verbosity = 1;

  // corpus
  ClassGrid grid;
  int instances_per_cell = 8;
  std::vector<Generator> generators = {Generator::GNM, Generator::BBA, Generator::NWS,
                                       Generator::SBM};

  // layout & rendering
  int layout_iterations = 500;
  RenderStyle style;

  // measures
  MeasureOptions measures;

  // pairing & rating
  PairingPolicy pairing = PairingPolicy::within_stratum;
  LiveRaterOptions rater;           // api_key stays empty here; resolved from env
  double cost_per_pair_usd = 0.01;  // estimate used by the pre-run cost printout

  void validate() const;  // throws ConfigError
};

// Parse + validate. Throws ConfigError on unknown keys, missing/unsupported
// version, malformed values, or unreadable file.
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<memory>");
RunConfig load_run_config(const std::filesystem::path& path);

// Canonical JSON for a config (round-trips through parse_run_config).
std::string run_config_to_json(const RunConfig& config);

}  // namespace graphsim
