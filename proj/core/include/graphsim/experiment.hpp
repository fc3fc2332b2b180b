// Pipeline orchestration: corpus construction (graphs, layouts, images,
// feature profiles, manifest), pair enumeration, measure sweeps, rating runs,
// and the append-only record store everything persists through.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graphsim/rater.hpp"
#include "graphsim/run_config.hpp"

namespace graphsim {

// ---- on-disk layout ----------------------------------------------------

struct CorpusPaths {
  std::filesystem::path root;
  std::filesystem::path graphs_dir;
  std::filesystem::path images_dir;
  std::filesystem::path features_dir;
  std::filesystem::path report_dir;
  std::filesystem::path manifest_file;
  std::filesystem::path records_jsonl;
  std::filesystem::path records_csv;

  static CorpusPaths under(const std::filesystem::path& output_dir);
};

// ---- manifest ----------------------------------------------------------

struct ManifestEntry {
  std::string id;
  Generator generator = Generator::GNM;
  std::string size_class;
  std::string density_class;
  std::uint64_t seed = 0;  // generation seed for this graph
  int node_count = 0;
  int edge_count = 0;
  int attempts = 0;       // draws needed to satisfy the acceptance predicate
  bool repaired = false;  // connectivity restored by rewiring
  // relative to the corpus root
  std::string graph_path;
  std::string svg_path;
  std::string png_path;
  std::string features_path;
  // content hashes of the files above
  std::uint64_t graph_hash = 0;
  std::uint64_t svg_hash = 0;
  std::uint64_t png_hash = 0;
  std::uint64_t features_hash = 0;
};

struct DatasetManifest {
  int version = 1;
  ClassGrid grid;
  std::vector<std::string> generators;
  int instances_per_cell = 0;
  std::uint64_t seed = 0;
  int layout_iterations = 0;
  int measure_bins = 0;
  RenderStyle style;
  std::string rng_algorithm;    // engine + draw mapping the corpus was built with
  std::string prompt_version;   // rater prompt the ratings are traceable to
  std::vector<ManifestEntry> entries;  // sorted by id

  const ManifestEntry* find(const std::string& id) const;
};

std::string manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const std::string& text,
                                   const std::string& origin = "<memory>");
void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

// ---- corpus construction ------------------------------------------------

struct BuildReport {
  int generated = 0;  // artifacts created this run
  int verified = 0;   // artifacts found intact and reused
};

// Deterministic graph id for one corpus slot, e.g. "gnm_s1_d2_i03".
std::string graph_id(Generator g, const std::string& size_class,
                     const std::string& density_class, int instance);

// Build or verify the full corpus under config.output_dir: graphs (connected,
// density within grid tolerance), SVG+PNG renderings, cached feature
// profiles, and the manifest. Rerunning over intact artifacts verifies hashes
// instead of regenerating; a mismatching artifact or a manifest from a
// different configuration raises CorpusError.
DatasetManifest build_dataset(const RunConfig& config, int jobs,
                              BuildReport* report = nullptr);

// ---- pairing -----------------------------------------------------------

struct PairRef {
  std::string pair_id;  // id_a + "|" + id_b, id_a < id_b
  std::string id_a;
  std::string id_b;
  std::string size_class;     // "mixed" when the sides disagree (all-pairs)
  std::string density_class;  // likewise
};

// All unordered pairs under the policy, sorted by pair id.
std::vector<PairRef> enumerate_pairs(const DatasetManifest& m, PairingPolicy policy);

// ---- records -----------------------------------------------------------

struct SimilarityRecord {
  std::string pair_id;
  std::string id_a;
  std::string id_b;
  std::string size_class;
  std::string density_class;
  bool has_measures = false;
  SimilarityVector measures;
  std::string status;  // "measured" | "rated" | "failed"
  std::string error;   // failure reason when status == "failed"
  // present when status == "rated"
  std::optional<double> rater_score;
  std::string rater_name;
  int attempts = 0;
  Rationale rationale;
};

std::string record_to_json(const SimilarityRecord& r);  // one line, no trailing \n
SimilarityRecord record_from_json(const std::string& line,
                                  const std::string& origin = "<memory>");

// Append-only JSON-Lines store; the latest line per pair id wins. A torn
// final line (interrupted write) is dropped on load and truncated away before
// the next append; corruption anywhere else raises CorpusError.
class RecordStore {
 public:
  explicit RecordStore(std::filesystem::path jsonl_path);

  const SimilarityRecord* find(const std::string& pair_id) const;
  std::size_t size() const { return latest_.size(); }
  bool recovered_torn_line() const { return recovered_torn_; }
  // latest version of every record, sorted by pair id
  std::vector<SimilarityRecord> snapshot() const;

  void append(const SimilarityRecord& r);

 private:
  std::filesystem::path path_;
  std::map<std::string, SimilarityRecord> latest_;
  std::ofstream out_;
  bool recovered_torn_ = false;
  std::uintmax_t valid_bytes_ = 0;
  bool opened_ = false;
};

// ---- sweeps ------------------------------------------------------------

struct MeasureRunStats {
  int computed = 0;
  int skipped = 0;  // already in the store
  int failed = 0;
};

// Computes similarity vectors for every pair not yet recorded, in
// deterministic order (parallel within fixed-size chunks, appended in pair
// order so an interrupted run leaves a clean resumable prefix). Per-pair
// measure errors become status "failed"; the sweep continues.
MeasureRunStats run_measures(const DatasetManifest& m, const std::vector<PairRef>& pairs,
                             const RunConfig& config, RecordStore& store, int jobs);

struct RatingRunStats {
  int rated = 0;
  int skipped = 0;  // already rated, previously failed, or beyond max_pairs
  int failed = 0;
};

// Rates every measured-but-unrated pair (deterministic order; max_pairs < 0
// means no cap). Rater errors mark the pair failed and the run continues;
// configuration errors abort before any request.
RatingRunStats run_ratings(const DatasetManifest& m, const std::vector<PairRef>& pairs,
                           Rater& rater, const RunConfig& config, RecordStore& store,
                           int jobs, int max_pairs = -1);

// Compact, sorted, byte-deterministic CSV of the latest records.
void export_records_csv(const RecordStore& store, const std::filesystem::path& path);

}  // namespace graphsim
