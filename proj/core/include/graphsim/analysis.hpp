// Stratified correlation analysis: Pearson r between rater scores and each
// similarity measure per (size, density) stratum, trend summaries over the
// resulting table, and the deterministic report files (CSV, heatmap, notes).
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "graphsim/experiment.hpp"

namespace graphsim {

// Sample Pearson correlation, two-pass (mean-subtracted) summation, clamped
// to [-1,1]. Throws AnalysisError: insufficient_data for mismatched lengths
// or fewer than 3 points, zero_variance when either vector is constant.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct CorrelationCell {
  std::string size_class;
  std::string density_class;
  std::string measure;
  std::optional<double> r;  // empty when status != "ok"
  int n = 0;                // rated pairs the cell aggregates
  std::string status;       // "ok" | "zero_variance" | "insufficient_n"
};

struct CorrelationTable {
  std::vector<std::string> size_classes;     // grid order
  std::vector<std::string> density_classes;  // grid order
  // stratum-major (size outer, density inner), then measure order
  std::vector<CorrelationCell> cells;

  const CorrelationCell* find(const std::string& size_class, const std::string& density_class,
                              const std::string& measure) const;
};

// One cell per (stratum, measure) over the rated records; failed or unrated
// records are skipped, and empty or degenerate strata produce missing cells
// with a reason rather than a fabricated r.
CorrelationTable correlation_table(const std::vector<SimilarityRecord>& records,
                                   const ClassGrid& grid);

// ---- trend summary -------------------------------------------------------

struct DensityTrend {
  std::string density_class;
  bool complete = false;        // all size cells defined
  bool non_increasing = false;  // across defined cells in size order
};

struct SizeSignPattern {
  std::string size_class;
  std::string signs;  // one of "+-0?" per density class, grid order
};

struct MeasureTrend {
  std::string measure;
  int defined_cells = 0;
  int total_cells = 0;
  std::optional<double> min_r;             // over defined cells
  bool all_at_least_threshold = false;     // defined on a complete measure column
  std::vector<DensityTrend> density_trends;
  std::vector<SizeSignPattern> size_patterns;
};

struct StratumRank {
  std::string measure;
  std::optional<double> r;
};

struct TrendReport {
  double threshold = 0.8;
  bool complete = false;  // every cell of the table is defined
  std::vector<MeasureTrend> measures;
  // measures ordered by r (descending, missing last) in the largest/densest
  // stratum, with the 1-based ranks of the community and betweenness columns
  // (0 when that cell is missing)
  std::string extreme_size_class;
  std::string extreme_density_class;
  std::vector<StratumRank> extreme_ranking;
  int community_rank = 0;
  int betweenness_rank = 0;
};

// Descriptive only: reports whether each expected pattern holds for this run.
// Trends over incomplete columns are computed on the defined cells and
// flagged incomplete.
TrendReport trend_report(const CorrelationTable& table, double threshold = 0.8);

// ---- report files ----------------------------------------------------------

// header: stratum_size,stratum_density,measure,r,n,status; one row per cell.
std::string correlations_csv(const CorrelationTable& table);
// 12x6 grid, diverging color scale over [-1,1], per-cell annotation, hatched
// missing cells.
std::string heatmap_svg(const CorrelationTable& table);
std::string findings_markdown(const TrendReport& report);

// Writes correlations.csv, heatmap.svg, and findings.md under report_dir.
// Byte-deterministic for identical inputs.
void emit_report(const CorrelationTable& table, const std::filesystem::path& report_dir,
                 double threshold = 0.8);

}  // namespace graphsim
