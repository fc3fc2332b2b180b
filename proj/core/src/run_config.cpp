#include "graphsim/run_config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "graphsim/errors.hpp"
#include "graphsim/util.hpp"

namespace graphsim {

std::string to_string(PairingPolicy p) {
  return p == PairingPolicy::within_stratum ? "within_stratum" : "all_pairs";
}

PairingPolicy pairing_from_string(const std::string& s) {
  if (s == "within_stratum") return PairingPolicy::within_stratum;
  if (s == "all_pairs") return PairingPolicy::all_pairs;
  throw ConfigError("unknown pairing policy: " + s);
}

void RunConfig::validate() const {
  if (version != 1) throw ConfigError("unsupported config version " + std::to_string(version));
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (instances_per_cell < 1) throw ConfigError("instances_per_cell must be >= 1");
  if (generators.empty()) throw ConfigError("at least one generator required");
  {
    std::set<Generator> seen(generators.begin(), generators.end());
    if (seen.size() != generators.size()) throw ConfigError("duplicate generator listed");
  }
  if (layout_iterations < 1) throw ConfigError("layout_iterations must be >= 1");
  if (measures.bins < 1) throw ConfigError("measure bins must be >= 1");
  if (!(rater.temperature >= 0.0 && rater.temperature <= 2.0))
    throw ConfigError("rater temperature must lie in [0,2]");
  if (rater.max_retries < 0) throw ConfigError("rater max_retries must be >= 0");
  if (rater.timeout_seconds < 1) throw ConfigError("rater timeout must be >= 1s");
  if (rater.requests_per_minute <= 0.0)
    throw ConfigError("rater requests_per_minute must be positive");
  if (rater.concurrency < 1) throw ConfigError("rater concurrency must be >= 1");
  if (cost_per_pair_usd < 0.0) throw ConfigError("cost_per_pair_usd must be >= 0");
  try {
    grid.validate();
    style.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
}

template <class T>
void read_to(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for \"") + key + "\"");
  }
}

template <class Pair, std::size_t N>
void read_classes(const json& j, const char* key, std::array<Pair, N>& out,
                  const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array() || it->size() != N)
    throw ConfigError(where + "." + key + " must be an array of exactly " + std::to_string(N) +
                      " [label, value] pairs");
  for (std::size_t i = 0; i < N; ++i) {
    const json& entry = (*it)[i];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_number())
      throw ConfigError(where + "." + key + " entries must be [label, value] pairs");
    out[i].first = entry[0].get<std::string>();
    out[i].second = entry[1].get<typename Pair::second_type>();
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError(origin + ": config is not valid JSON");
  if (!j.is_object()) throw ConfigError(origin + ": config must be a JSON object");

  check_keys(j,
             {"version", "output_dir", "seed", "verbosity", "corpus", "layout", "style",
              "measures", "pairing", "rater"},
             "config");
  if (!j.contains("version")) throw ConfigError(origin + ": missing required key \"version\"");

  RunConfig c;
  read_to(j, "version", c.version);
  {
    std::string dir = c.output_dir.string();
    read_to(j, "output_dir", dir);
    c.output_dir = dir;
  }
  read_to(j, "seed", c.seed);
  read_to(j, "verbosity", c.verbosity);

  if (j.contains("corpus")) {
    const json& corpus = j["corpus"];
    check_keys(corpus,
               {"instances_per_cell", "generators", "size_classes", "density_classes",
                "density_tolerance"},
               "corpus");
    read_to(corpus, "instances_per_cell", c.instances_per_cell);
    if (corpus.contains("generators")) {
      std::vector<std::string> names;
      read_to(corpus, "generators", names);
      c.generators.clear();
      for (const std::string& name : names) c.generators.push_back(generator_from_string(name));
    }
    read_classes(corpus, "size_classes", c.grid.size_classes, "corpus");
    read_classes(corpus, "density_classes", c.grid.density_classes, "corpus");
    read_to(corpus, "density_tolerance", c.grid.tolerance);
  }

  if (j.contains("layout")) {
    const json& layout = j["layout"];
    check_keys(layout, {"iterations"}, "layout");
    read_to(layout, "iterations", c.layout_iterations);
  }

  if (j.contains("style")) {
    const json& style = j["style"];
    check_keys(style, {"canvas", "margin", "node_fill", "edge_stroke", "edge_width", "background"},
               "style");
    read_to(style, "canvas", c.style.canvas);
    read_to(style, "margin", c.style.margin);
    read_to(style, "node_fill", c.style.node_fill);
    read_to(style, "edge_stroke", c.style.edge_stroke);
    read_to(style, "edge_width", c.style.edge_width);
    read_to(style, "background", c.style.background);
  }

  if (j.contains("measures")) {
    const json& measures = j["measures"];
    check_keys(measures, {"bins"}, "measures");
    read_to(measures, "bins", c.measures.bins);
  }

  if (j.contains("pairing")) {
    std::string policy;
    read_to(j, "pairing", policy);
    c.pairing = pairing_from_string(policy);
  }

  if (j.contains("rater")) {
    const json& rater = j["rater"];
    check_keys(rater,
               {"endpoint", "model", "temperature", "max_retries", "timeout_seconds",
                "requests_per_minute", "concurrency", "cost_per_pair_usd"},
               "rater");
    read_to(rater, "endpoint", c.rater.endpoint);
    read_to(rater, "model", c.rater.model);
    read_to(rater, "temperature", c.rater.temperature);
    read_to(rater, "max_retries", c.rater.max_retries);
    read_to(rater, "timeout_seconds", c.rater.timeout_seconds);
    read_to(rater, "requests_per_minute", c.rater.requests_per_minute);
    read_to(rater, "concurrency", c.rater.concurrency);
    read_to(rater, "cost_per_pair_usd", c.cost_per_pair_usd);
  }

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(text, path.string());
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["version"] = c.version;
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["verbosity"] = c.verbosity;

  json size_classes = json::array();
  for (const auto& [label, n] : c.grid.size_classes)
    size_classes.push_back(json::array({label, n}));
  json density_classes = json::array();
  for (const auto& [label, d] : c.grid.density_classes)
    density_classes.push_back(json::array({label, d}));
  std::vector<std::string> generator_names;
  for (Generator g : c.generators) generator_names.push_back(to_string(g));
  j["corpus"] = {{"instances_per_cell", c.instances_per_cell},
                 {"generators", generator_names},
                 {"size_classes", size_classes},
                 {"density_classes", density_classes},
                 {"density_tolerance", c.grid.tolerance}};

  j["layout"] = {{"iterations", c.layout_iterations}};
  j["style"] = {{"canvas", c.style.canvas},
                {"margin", c.style.margin},
                {"node_fill", c.style.node_fill},
                {"edge_stroke", c.style.edge_stroke},
                {"edge_width", c.style.edge_width},
                {"background", c.style.background}};
  j["measures"] = {{"bins", c.measures.bins}};
  j["pairing"] = to_string(c.pairing);
  j["rater"] = {{"endpoint", c.rater.endpoint},
                {"model", c.rater.model},
                {"temperature", c.rater.temperature},
                {"max_retries", c.rater.max_retries},
                {"timeout_seconds", c.rater.timeout_seconds},
                {"requests_per_minute", c.rater.requests_per_minute},
                {"concurrency", c.rater.concurrency},
                {"cost_per_pair_usd", c.cost_per_pair_usd}};
  return j.dump(2) + "\n";
}

}  // namespace graphsim
