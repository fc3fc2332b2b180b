#include "graphsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "graphsim/errors.hpp"
#include "graphsim/features.hpp"
#include "graphsim/graph.hpp"
#include "graphsim/layout.hpp"
#include "graphsim/rng.hpp"
#include "graphsim/similarity.hpp"
#include "graphsim/util.hpp"

namespace graphsim {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::uint64_t hex_to_u64(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key) || !j[key].is_string())
    throw CorpusError(origin + ": missing or non-string field '" + std::string(key) + "'");
  try {
    return std::stoull(j[key].get<std::string>(), nullptr, 16);
  } catch (const std::exception&) {
    throw CorpusError(origin + ": field '" + std::string(key) + "' is not a hex hash");
  }
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key))
    throw CorpusError(origin + ": missing field '" + std::string(key) + "'");
  try {
    return j[key].get<T>();
  } catch (const std::exception&) {
    throw CorpusError(origin + ": field '" + std::string(key) + "' has the wrong type");
  }
}

json style_to_json(const RenderStyle& s) {
  return json{{"canvas", s.canvas},
              {"margin", s.margin},
              {"node_fill", s.node_fill},
              {"edge_stroke", s.edge_stroke},
              {"edge_width", s.edge_width},
              {"background", s.background}};
}

RenderStyle style_from_json(const json& j, const std::string& origin) {
  RenderStyle s;
  s.canvas = get_field<int>(j, "canvas", origin);
  s.margin = get_field<double>(j, "margin", origin);
  s.node_fill = get_field<std::string>(j, "node_fill", origin);
  s.edge_stroke = get_field<std::string>(j, "edge_stroke", origin);
  s.edge_width = get_field<double>(j, "edge_width", origin);
  s.background = get_field<std::string>(j, "background", origin);
  return s;
}

json grid_to_json(const ClassGrid& g) {
  json sizes = json::array();
  for (const auto& [label, n] : g.size_classes) sizes.push_back(json::array({label, n}));
  json densities = json::array();
  for (const auto& [label, d] : g.density_classes)
    densities.push_back(json::array({label, d}));
  return json{{"size_classes", sizes},
              {"density_classes", densities},
              {"tolerance", g.tolerance}};
}

ClassGrid grid_from_json(const json& j, const std::string& origin) {
  ClassGrid g;
  const json& sizes = j.at("size_classes");
  const json& densities = j.at("density_classes");
  if (!sizes.is_array() || sizes.size() != g.size_classes.size() || !densities.is_array() ||
      densities.size() != g.density_classes.size())
    throw CorpusError(origin + ": malformed class grid");
  for (std::size_t i = 0; i < g.size_classes.size(); ++i)
    g.size_classes[i] = {sizes[i].at(0).get<std::string>(), sizes[i].at(1).get<int>()};
  for (std::size_t i = 0; i < g.density_classes.size(); ++i)
    g.density_classes[i] = {densities[i].at(0).get<std::string>(),
                            densities[i].at(1).get<double>()};
  g.tolerance = j.at("tolerance").get<double>();
  return g;
}

// Header = everything slot-determining; used to detect a corpus built with a
// different configuration.
json manifest_header(const DatasetManifest& m) {
  return json{{"version", m.version},
              {"grid", grid_to_json(m.grid)},
              {"generators", m.generators},
              {"instances_per_cell", m.instances_per_cell},
              {"seed", m.seed},
              {"layout_iterations", m.layout_iterations},
              {"measure_bins", m.measure_bins},
              {"style", style_to_json(m.style)},
              {"rng_algorithm", m.rng_algorithm},
              {"prompt_version", m.prompt_version}};
}

json entry_to_json(const ManifestEntry& e) {
  return json{{"id", e.id},
              {"generator", to_string(e.generator)},
              {"size_class", e.size_class},
              {"density_class", e.density_class},
              {"seed", e.seed},
              {"node_count", e.node_count},
              {"edge_count", e.edge_count},
              {"attempts", e.attempts},
              {"repaired", e.repaired},
              {"graph_path", e.graph_path},
              {"svg_path", e.svg_path},
              {"png_path", e.png_path},
              {"features_path", e.features_path},
              {"graph_hash", to_hex(e.graph_hash)},
              {"svg_hash", to_hex(e.svg_hash)},
              {"png_hash", to_hex(e.png_hash)},
              {"features_hash", to_hex(e.features_hash)}};
}

ManifestEntry entry_from_json(const json& j, const std::string& origin) {
  ManifestEntry e;
  e.id = get_field<std::string>(j, "id", origin);
  e.generator = generator_from_string(get_field<std::string>(j, "generator", origin));
  e.size_class = get_field<std::string>(j, "size_class", origin);
  e.density_class = get_field<std::string>(j, "density_class", origin);
  e.seed = get_field<std::uint64_t>(j, "seed", origin);
  e.node_count = get_field<int>(j, "node_count", origin);
  e.edge_count = get_field<int>(j, "edge_count", origin);
  e.attempts = get_field<int>(j, "attempts", origin);
  e.repaired = get_field<bool>(j, "repaired", origin);
  e.graph_path = get_field<std::string>(j, "graph_path", origin);
  e.svg_path = get_field<std::string>(j, "svg_path", origin);
  e.png_path = get_field<std::string>(j, "png_path", origin);
  e.features_path = get_field<std::string>(j, "features_path", origin);
  e.graph_hash = hex_to_u64(j, "graph_hash", origin);
  e.svg_hash = hex_to_u64(j, "svg_hash", origin);
  e.png_hash = hex_to_u64(j, "png_hash", origin);
  e.features_hash = hex_to_u64(j, "features_hash", origin);
  return e;
}

}  // namespace

// ---- paths ---------------------------------------------------------------

CorpusPaths CorpusPaths::under(const std::filesystem::path& output_dir) {
  CorpusPaths p;
  p.root = output_dir;
  p.graphs_dir = output_dir / "graphs";
  p.images_dir = output_dir / "images";
  p.features_dir = output_dir / "features";
  p.report_dir = output_dir / "report";
  p.manifest_file = output_dir / "manifest.json";
  p.records_jsonl = output_dir / "records.jsonl";
  p.records_csv = output_dir / "records.csv";
  return p;
}

// ---- manifest --------------------------------------------------------------

const ManifestEntry* DatasetManifest::find(const std::string& id) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), id,
                             [](const ManifestEntry& e, const std::string& k) { return e.id < k; });
  if (it == entries.end() || it->id != id) return nullptr;
  return &*it;
}

std::string manifest_to_json(const DatasetManifest& m) {
  json doc = manifest_header(m);
  json entries = json::array();
  for (const ManifestEntry& e : m.entries) entries.push_back(entry_to_json(e));
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw CorpusError(origin + ": invalid manifest JSON: " + e.what());
  }
  if (!doc.is_object()) throw CorpusError(origin + ": manifest is not a JSON object");
  DatasetManifest m;
  try {
    m.version = get_field<int>(doc, "version", origin);
    m.grid = grid_from_json(doc.at("grid"), origin);
    m.generators = get_field<std::vector<std::string>>(doc, "generators", origin);
    m.instances_per_cell = get_field<int>(doc, "instances_per_cell", origin);
    m.seed = get_field<std::uint64_t>(doc, "seed", origin);
    m.layout_iterations = get_field<int>(doc, "layout_iterations", origin);
    m.measure_bins = get_field<int>(doc, "measure_bins", origin);
    m.style = style_from_json(doc.at("style"), origin);
    m.rng_algorithm = get_field<std::string>(doc, "rng_algorithm", origin);
    m.prompt_version = get_field<std::string>(doc, "prompt_version", origin);
    for (const json& je : doc.at("entries")) m.entries.push_back(entry_from_json(je, origin));
  } catch (const json::exception& e) {
    throw CorpusError(origin + ": malformed manifest: " + e.what());
  }
  std::unordered_set<std::string> seen;
  for (const ManifestEntry& e : m.entries)
    if (!seen.insert(e.id).second)
      throw CorpusError(origin + ": duplicate manifest entry '" + e.id + "'");
  if (!std::is_sorted(m.entries.begin(), m.entries.end(),
                      [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; }))
    throw CorpusError(origin + ": manifest entries are not sorted by id");
  return m;
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  write_file_atomic(path, manifest_to_json(m));
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_file(path), path.string());
}

// ---- corpus construction ---------------------------------------------------

std::string graph_id(Generator g, const std::string& size_class,
                     const std::string& density_class, int instance) {
  char suffix[8];
  std::snprintf(suffix, sizeof suffix, "_i%02d", instance);
  return lower(to_string(g)) + "_" + lower(size_class) + "_" + lower(density_class) + suffix;
}

namespace {

struct Slot {
  std::string id;
  Generator generator;
  std::string size_class;
  std::string density_class;
  std::uint64_t slot_seed;  // root of this slot's seed chain
};

std::vector<Slot> corpus_slots(const RunConfig& config) {
  std::vector<Slot> slots;
  for (Generator gen : config.generators)
    for (const auto& [size_label, n] : config.grid.size_classes)
      for (const auto& [density_label, d] : config.grid.density_classes)
        for (int i = 0; i < config.instances_per_cell; ++i) {
          Slot s;
          s.id = graph_id(gen, size_label, density_label, i);
          s.generator = gen;
          s.size_class = size_label;
          s.density_class = density_label;
          s.slot_seed = derive_seed(config.seed, fnv1a64(s.id));
          slots.push_back(std::move(s));
        }
  return slots;
}

DatasetManifest expected_manifest(const RunConfig& config) {
  DatasetManifest m;
  m.version = 1;
  m.grid = config.grid;
  for (Generator g : config.generators) m.generators.push_back(to_string(g));
  m.instances_per_cell = config.instances_per_cell;
  m.seed = config.seed;
  m.layout_iterations = config.layout_iterations;
  m.measure_bins = config.measures.bins;
  m.style = config.style;
  m.rng_algorithm = kRngAlgorithm;
  m.prompt_version = kPromptVersion;
  return m;
}

// Build every artifact for one corpus slot and return its manifest entry.
ManifestEntry build_slot(const Slot& slot, const RunConfig& config, const CorpusPaths& paths) {
  GraphSpec spec;
  spec.id = slot.id;
  spec.size_class = slot.size_class;
  spec.density_class = slot.density_class;
  spec.params =
      params_for_target(slot.generator, slot.size_class, slot.density_class, config.grid);
  spec.seed = derive_seed(slot.slot_seed, 1);

  GenerateOptions opts;
  opts.policy = ConnectivityPolicy::resample_then_repair;
  opts.enforce_density = true;
  GeneratedGraph gen = generate_connected(spec, config.grid, opts);

  GraphFileMeta meta;
  meta.id = slot.id;
  meta.generator = slot.generator;
  meta.size_class = slot.size_class;
  meta.density_class = slot.density_class;
  meta.seed = spec.seed;

  Layout layout =
      fr_layout(gen.graph, config.layout_iterations, derive_seed(slot.slot_seed, 2));
  std::string svg = render_svg(gen.graph, layout, config.style);
  std::vector<std::uint8_t> png = render_png(gen.graph, layout, config.style);
  FeatureProfile profile = compute_features(gen.graph);
  std::string graph_text = graph_file_text(gen.graph, meta);
  std::string features_text = profile_to_json(profile);

  ManifestEntry e;
  e.id = slot.id;
  e.generator = slot.generator;
  e.size_class = slot.size_class;
  e.density_class = slot.density_class;
  e.seed = spec.seed;
  e.node_count = gen.graph.node_count();
  e.edge_count = gen.graph.edge_count();
  e.attempts = gen.attempts;
  e.repaired = gen.repaired;
  e.graph_path = "graphs/" + slot.id + ".json";
  e.svg_path = "images/" + slot.id + ".svg";
  e.png_path = "images/" + slot.id + ".png";
  e.features_path = "features/" + slot.id + ".json";
  e.graph_hash = fnv1a64(graph_text);
  e.svg_hash = fnv1a64(svg);
  e.png_hash = fnv1a64(png.data(), png.size());
  e.features_hash = fnv1a64(features_text);

  write_file_atomic(paths.root / e.graph_path, graph_text);
  write_file_atomic(paths.root / e.svg_path, svg);
  write_file_atomic(paths.root / e.png_path, png);
  write_file_atomic(paths.root / e.features_path, features_text);
  return e;
}

// All four artifact files exist and hash to what the manifest recorded.
bool slot_intact(const ManifestEntry& e, const CorpusPaths& paths) {
  const std::pair<const std::string*, std::uint64_t> files[] = {
      {&e.graph_path, e.graph_hash},
      {&e.svg_path, e.svg_hash},
      {&e.png_path, e.png_hash},
      {&e.features_path, e.features_hash},
  };
  for (const auto& [rel, expected] : files) {
    std::filesystem::path p = paths.root / *rel;
    if (!std::filesystem::exists(p)) return false;
    std::string bytes = read_file(p);
    if (fnv1a64(bytes) != expected)
      throw CorpusError(p.string() + ": content does not match the manifest hash (" +
                        to_hex(fnv1a64(bytes)) + " != " + to_hex(expected) +
                        "); the corpus is corrupt or was edited");
  }
  return true;
}

}  // namespace

DatasetManifest build_dataset(const RunConfig& config, int jobs, BuildReport* report) {
  config.validate();
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  std::filesystem::create_directories(paths.graphs_dir);
  std::filesystem::create_directories(paths.images_dir);
  std::filesystem::create_directories(paths.features_dir);

  DatasetManifest manifest = expected_manifest(config);

  // A manifest already on disk must describe the same configuration.
  std::unordered_map<std::string, ManifestEntry> prior;
  if (std::filesystem::exists(paths.manifest_file)) {
    DatasetManifest old = load_manifest(paths.manifest_file);
    if (manifest_header(old) != manifest_header(manifest))
      throw CorpusError(paths.manifest_file.string() +
                        ": existing corpus was built with a different configuration; "
                        "use a fresh output directory");
    for (ManifestEntry& e : old.entries) prior.emplace(e.id, std::move(e));
  }

  std::vector<Slot> slots = corpus_slots(config);
  std::vector<ManifestEntry> entries(slots.size());
  std::atomic<int> generated{0};
  std::atomic<int> verified{0};

  parallel_for(slots.size(), jobs, [&](std::size_t i) {
    const Slot& slot = slots[i];
    auto it = prior.find(slot.id);
    if (it != prior.end() && slot_intact(it->second, paths)) {
      entries[i] = it->second;
      verified.fetch_add(1, std::memory_order_relaxed);
      return;
    }
    ManifestEntry fresh = build_slot(slot, config, paths);
    if (it != prior.end()) {
      // Rebuild is deterministic, so a divergence from the recorded hashes
      // means the corpus no longer matches its manifest.
      const ManifestEntry& old = it->second;
      if (fresh.graph_hash != old.graph_hash || fresh.svg_hash != old.svg_hash ||
          fresh.png_hash != old.png_hash || fresh.features_hash != old.features_hash)
        throw CorpusError(slot.id + ": rebuilt artifacts do not match the manifest hashes");
    }
    entries[i] = std::move(fresh);
    generated.fetch_add(1, std::memory_order_relaxed);
  });

  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  manifest.entries = std::move(entries);
  save_manifest(manifest, paths.manifest_file);
  if (report) {
    report->generated = generated.load();
    report->verified = verified.load();
  }
  return manifest;
}

// ---- pairing ---------------------------------------------------------------

std::vector<PairRef> enumerate_pairs(const DatasetManifest& m, PairingPolicy policy) {
  std::vector<PairRef> pairs;
  const auto& es = m.entries;
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      const ManifestEntry& a = es[i].id < es[j].id ? es[i] : es[j];
      const ManifestEntry& b = es[i].id < es[j].id ? es[j] : es[i];
      bool same_stratum =
          a.size_class == b.size_class && a.density_class == b.density_class;
      if (policy == PairingPolicy::within_stratum && !same_stratum) continue;
      PairRef p;
      p.pair_id = a.id + "|" + b.id;
      p.id_a = a.id;
      p.id_b = b.id;
      p.size_class = same_stratum ? a.size_class : std::string("mixed");
      p.density_class = same_stratum ? a.density_class : std::string("mixed");
      pairs.push_back(std::move(p));
    }
  std::sort(pairs.begin(), pairs.end(),
            [](const PairRef& a, const PairRef& b) { return a.pair_id < b.pair_id; });
  return pairs;
}

// ---- records ---------------------------------------------------------------

std::string record_to_json(const SimilarityRecord& r) {
  json doc{{"pair_id", r.pair_id},
           {"id_a", r.id_a},
           {"id_b", r.id_b},
           {"size_class", r.size_class},
           {"density_class", r.density_class},
           {"status", r.status}};
  if (r.has_measures) {
    json ms;
    auto vals = r.measures.as_array();
    for (std::size_t i = 0; i < kMeasureNames.size(); ++i) ms[kMeasureNames[i]] = vals[i];
    doc["measures"] = std::move(ms);
  }
  if (!r.error.empty()) doc["error"] = r.error;
  if (r.rater_score.has_value()) {
    doc["rater_score"] = *r.rater_score;
    doc["rater_name"] = r.rater_name;
    doc["attempts"] = r.attempts;
    doc["rationale"] = json{{"overall_structure", r.rationale.overall_structure},
                            {"substructures", r.rationale.substructures},
                            {"node_degrees", r.rationale.node_degrees},
                            {"edge_density", r.rationale.edge_density},
                            {"community_distribution", r.rationale.community_distribution},
                            {"other", r.rationale.other}};
  }
  return doc.dump();
}

SimilarityRecord record_from_json(const std::string& line, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::exception& e) {
    throw CorpusError(origin + ": invalid record line: " + e.what());
  }
  if (!doc.is_object()) throw CorpusError(origin + ": record line is not a JSON object");
  SimilarityRecord r;
  r.pair_id = get_field<std::string>(doc, "pair_id", origin);
  r.id_a = get_field<std::string>(doc, "id_a", origin);
  r.id_b = get_field<std::string>(doc, "id_b", origin);
  r.size_class = get_field<std::string>(doc, "size_class", origin);
  r.density_class = get_field<std::string>(doc, "density_class", origin);
  r.status = get_field<std::string>(doc, "status", origin);
  if (r.status != "measured" && r.status != "rated" && r.status != "failed")
    throw CorpusError(origin + ": unknown record status '" + r.status + "'");
  if (doc.contains("measures")) {
    r.has_measures = true;
    const json& ms = doc["measures"];
    auto want = [&](const char* key) {
      if (!ms.contains(key) || !ms[key].is_number())
        throw CorpusError(origin + ": record measures missing '" + std::string(key) + "'");
      return ms[key].get<double>();
    };
    r.measures.size = want("size");
    r.measures.density = want("density");
    r.measures.degree = want("degree");
    r.measures.clustering = want("clustering");
    r.measures.betweenness = want("betweenness");
    r.measures.community = want("community");
  }
  if (doc.contains("error")) r.error = get_field<std::string>(doc, "error", origin);
  if (doc.contains("rater_score")) {
    r.rater_score = get_field<double>(doc, "rater_score", origin);
    r.rater_name = get_field<std::string>(doc, "rater_name", origin);
    r.attempts = get_field<int>(doc, "attempts", origin);
    if (doc.contains("rationale")) {
      const json& ra = doc["rationale"];
      auto grab = [&](const char* key) {
        return ra.contains(key) && ra[key].is_string() ? ra[key].get<std::string>()
                                                       : std::string();
      };
      r.rationale.overall_structure = grab("overall_structure");
      r.rationale.substructures = grab("substructures");
      r.rationale.node_degrees = grab("node_degrees");
      r.rationale.edge_density = grab("edge_density");
      r.rationale.community_distribution = grab("community_distribution");
      r.rationale.other = grab("other");
    }
  }
  return r;
}

RecordStore::RecordStore(std::filesystem::path jsonl_path) : path_(std::move(jsonl_path)) {
  if (!std::filesystem::exists(path_)) return;
  std::string text = read_file(path_);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    bool terminated = nl != std::string::npos;
    std::string line = text.substr(pos, terminated ? nl - pos : std::string::npos);
    std::size_t next = terminated ? nl + 1 : text.size();
    if (line.empty()) {
      pos = next;
      continue;
    }
    bool ok = terminated;
    SimilarityRecord r;
    if (ok) {
      try {
        r = record_from_json(line, path_.string());
      } catch (const CorpusError&) {
        ok = false;
      }
    }
    if (!ok) {
      // Only the final line may be torn (interrupted append); anything else
      // is real corruption.
      if (next < text.size())
        throw CorpusError(path_.string() + ": corrupt record line at byte " +
                          std::to_string(pos));
      recovered_torn_ = true;
      break;
    }
    latest_[r.pair_id] = std::move(r);
    pos = next;
    valid_bytes_ = pos;
  }
}

const SimilarityRecord* RecordStore::find(const std::string& pair_id) const {
  auto it = latest_.find(pair_id);
  return it == latest_.end() ? nullptr : &it->second;
}

std::vector<SimilarityRecord> RecordStore::snapshot() const {
  std::vector<SimilarityRecord> out;
  out.reserve(latest_.size());
  for (const auto& [_, r] : latest_) out.push_back(r);
  return out;
}

void RecordStore::append(const SimilarityRecord& r) {
  if (!opened_) {
    std::filesystem::create_directories(path_.parent_path());
    if (std::filesystem::exists(path_) && std::filesystem::file_size(path_) > valid_bytes_)
      std::filesystem::resize_file(path_, valid_bytes_);  // drop the torn tail
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw IoError("cannot open " + path_.string() + " for append");
    opened_ = true;
  }
  out_ << record_to_json(r) << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed on " + path_.string());
  latest_[r.pair_id] = r;
}

// ---- sweeps ----------------------------------------------------------------

namespace {

// Feature profiles for every id referenced by `pairs`, keyed by id.
std::unordered_map<std::string, FeatureProfile> load_profiles(
    const DatasetManifest& m, const std::vector<PairRef>& pairs, const CorpusPaths& paths) {
  std::unordered_set<std::string> ids;
  for (const PairRef& p : pairs) {
    ids.insert(p.id_a);
    ids.insert(p.id_b);
  }
  std::unordered_map<std::string, FeatureProfile> profiles;
  profiles.reserve(ids.size());
  for (const std::string& id : ids) {
    const ManifestEntry* e = m.find(id);
    if (!e) throw CorpusError("pair references unknown graph '" + id + "'");
    profiles.emplace(id, load_profile(paths.root / e->features_path));
  }
  return profiles;
}

SimilarityRecord base_record(const PairRef& p) {
  SimilarityRecord r;
  r.pair_id = p.pair_id;
  r.id_a = p.id_a;
  r.id_b = p.id_b;
  r.size_class = p.size_class;
  r.density_class = p.density_class;
  return r;
}

}  // namespace

MeasureRunStats run_measures(const DatasetManifest& m, const std::vector<PairRef>& pairs,
                             const RunConfig& config, RecordStore& store, int jobs) {
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  MeasureRunStats stats;
  std::vector<const PairRef*> todo;
  for (const PairRef& p : pairs) {
    if (store.find(p.pair_id))
      ++stats.skipped;
    else
      todo.push_back(&p);
  }
  if (todo.empty()) return stats;

  auto profiles = load_profiles(m, pairs, paths);

  // Parallel within a chunk, appended in pair order, so killing the run
  // leaves a clean prefix and a rerun recomputes only the remainder.
  const std::size_t chunk = 256;
  for (std::size_t base = 0; base < todo.size(); base += chunk) {
    std::size_t count = std::min(chunk, todo.size() - base);
    std::vector<SimilarityRecord> results(count);
    parallel_for(count, jobs, [&](std::size_t k) {
      const PairRef& p = *todo[base + k];
      SimilarityRecord r = base_record(p);
      try {
        r.measures =
            similarity_vector(profiles.at(p.id_a), profiles.at(p.id_b), config.measures);
        r.has_measures = true;
        r.status = "measured";
      } catch (const MeasureError& e) {
        r.status = "failed";
        r.error = e.what();
      }
      results[k] = std::move(r);
    });
    for (SimilarityRecord& r : results) {
      store.append(r);
      if (r.status == "failed")
        ++stats.failed;
      else
        ++stats.computed;
    }
  }
  return stats;
}

RatingRunStats run_ratings(const DatasetManifest& m, const std::vector<PairRef>& pairs,
                           Rater& rater, const RunConfig& config, RecordStore& store,
                           int jobs, int max_pairs) {
  CorpusPaths paths = CorpusPaths::under(config.output_dir);
  RatingRunStats stats;
  std::vector<const PairRef*> todo;
  for (const PairRef& p : pairs) {
    const SimilarityRecord* r = store.find(p.pair_id);
    if (r && r->status == "measured" &&
        (max_pairs < 0 || static_cast<int>(todo.size()) < max_pairs))
      todo.push_back(&p);
    else
      ++stats.skipped;
  }
  if (todo.empty()) return stats;

  auto profiles = load_profiles(m, pairs, paths);

  int budget = rater.concurrency();
  int threads = budget == 0 ? jobs : budget;
  if (budget != 0 && jobs > 0) threads = std::min(jobs, budget);
  const std::size_t chunk = std::max<std::size_t>(threads > 0 ? threads : 8, 1) * 4;

  for (std::size_t base = 0; base < todo.size(); base += chunk) {
    std::size_t count = std::min(chunk, todo.size() - base);
    std::vector<SimilarityRecord> results(count);
    parallel_for(count, threads, [&](std::size_t k) {
      const PairRef& p = *todo[base + k];
      SimilarityRecord r = *store.find(p.pair_id);
      PairInput input;
      input.pair_id = p.pair_id;
      input.profile_a = &profiles.at(p.id_a);
      input.profile_b = &profiles.at(p.id_b);
      const ManifestEntry* ea = m.find(p.id_a);
      const ManifestEntry* eb = m.find(p.id_b);
      input.image_a = paths.root / (ea ? ea->png_path : std::string());
      input.image_b = paths.root / (eb ? eb->png_path : std::string());
      try {
        Rating rating = rater.rate(input);
        r.status = "rated";
        r.rater_score = rating.similarity;
        r.rationale = rating.rationale;
        r.rater_name = rater.name();
        r.attempts = rating.attempts;
        r.error.clear();
      } catch (const RaterError& e) {
        r.status = "failed";
        r.error = e.what();
      }
      results[k] = std::move(r);
    });
    for (SimilarityRecord& r : results) {
      store.append(r);
      if (r.status == "failed")
        ++stats.failed;
      else
        ++stats.rated;
    }
  }
  return stats;
}

void export_records_csv(const RecordStore& store, const std::filesystem::path& path) {
  std::string out =
      "pair_id,id_a,id_b,size_class,density_class,sim_size,sim_density,sim_degree,"
      "sim_clustering,sim_betweenness,sim_community,rater_score,rater_name,attempts,"
      "status,error\n";
  for (const SimilarityRecord& r : store.snapshot()) {
    auto vals = r.measures.as_array();
    out += csv_escape(r.pair_id);
    out += ',';
    out += csv_escape(r.id_a);
    out += ',';
    out += csv_escape(r.id_b);
    out += ',';
    out += csv_escape(r.size_class);
    out += ',';
    out += csv_escape(r.density_class);
    for (double v : vals) {
      out += ',';
      if (r.has_measures) out += format_double(v);
    }
    out += ',';
    if (r.rater_score.has_value()) out += format_double(*r.rater_score);
    out += ',';
    out += csv_escape(r.rater_name);
    out += ',';
    if (r.rater_score.has_value()) out += std::to_string(r.attempts);
    out += ',';
    out += csv_escape(r.status);
    out += ',';
    out += csv_escape(r.error);
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace graphsim
