#include "graphsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "graphsim/errors.hpp"
#include "graphsim/util.hpp"

namespace graphsim {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw AnalysisError(AnalysisErrorKind::insufficient_data,
                        "pearson: vectors have different lengths (" + std::to_string(x.size()) +
                            " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 3)
    throw AnalysisError(AnalysisErrorKind::insufficient_data,
                        "pearson: need at least 3 points, got " + std::to_string(x.size()));
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0)
    throw AnalysisError(AnalysisErrorKind::zero_variance, "pearson: x has zero variance");
  if (syy == 0.0)
    throw AnalysisError(AnalysisErrorKind::zero_variance, "pearson: y has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

const CorrelationCell* CorrelationTable::find(const std::string& size_class,
                                              const std::string& density_class,
                                              const std::string& measure) const {
  for (const CorrelationCell& c : cells)
    if (c.size_class == size_class && c.density_class == density_class && c.measure == measure)
      return &c;
  return nullptr;
}

CorrelationTable correlation_table(const std::vector<SimilarityRecord>& records,
                                   const ClassGrid& grid) {
  grid.validate();
  CorrelationTable table;
  for (const auto& [label, _] : grid.size_classes) table.size_classes.push_back(label);
  for (const auto& [label, _] : grid.density_classes) table.density_classes.push_back(label);

  // stratum -> per-measure x vectors plus the shared y (rater score) vector
  struct StratumData {
    std::array<std::vector<double>, 6> xs;
    std::vector<double> y;
  };
  std::map<std::pair<std::string, std::string>, StratumData> strata;
  for (const SimilarityRecord& r : records) {
    if (r.status != "rated" || !r.rater_score.has_value() || !r.has_measures) continue;
    auto it = strata.find({r.size_class, r.density_class});
    if (it == strata.end())
      it = strata.emplace(std::make_pair(r.size_class, r.density_class), StratumData{}).first;
    auto vals = r.measures.as_array();
    for (std::size_t mi = 0; mi < vals.size(); ++mi) it->second.xs[mi].push_back(vals[mi]);
    it->second.y.push_back(*r.rater_score);
  }

  for (const std::string& s : table.size_classes)
    for (const std::string& d : table.density_classes) {
      auto it = strata.find({s, d});
      const StratumData* data = it == strata.end() ? nullptr : &it->second;
      for (std::size_t mi = 0; mi < kMeasureNames.size(); ++mi) {
        CorrelationCell cell;
        cell.size_class = s;
        cell.density_class = d;
        cell.measure = kMeasureNames[mi];
        cell.n = data ? static_cast<int>(data->y.size()) : 0;
        if (!data || data->y.size() < 3) {
          cell.status = "insufficient_n";
        } else {
          try {
            cell.r = pearson(data->xs[mi], data->y);
            cell.status = "ok";
          } catch (const AnalysisError& e) {
            cell.status = e.kind() == AnalysisErrorKind::zero_variance ? "zero_variance"
                                                                       : "insufficient_n";
          }
        }
        table.cells.push_back(std::move(cell));
      }
    }
  return table;
}

// ---- trends ----------------------------------------------------------------

TrendReport trend_report(const CorrelationTable& table, double threshold) {
  TrendReport rep;
  rep.threshold = threshold;
  rep.complete = std::all_of(table.cells.begin(), table.cells.end(),
                             [](const CorrelationCell& c) { return c.status == "ok"; });
  rep.extreme_size_class = table.size_classes.back();
  rep.extreme_density_class = table.density_classes.back();

  for (const char* measure : kMeasureNames) {
    MeasureTrend t;
    t.measure = measure;
    for (const std::string& s : table.size_classes)
      for (const std::string& d : table.density_classes) {
        const CorrelationCell* c = table.find(s, d, measure);
        ++t.total_cells;
        if (c && c->r.has_value()) {
          ++t.defined_cells;
          if (!t.min_r || *c->r < *t.min_r) t.min_r = *c->r;
        }
      }
    t.all_at_least_threshold =
        t.defined_cells == t.total_cells && t.min_r && *t.min_r >= threshold;

    for (const std::string& d : table.density_classes) {
      DensityTrend dt;
      dt.density_class = d;
      std::vector<double> run;
      int defined = 0;
      for (const std::string& s : table.size_classes) {
        const CorrelationCell* c = table.find(s, d, measure);
        if (c && c->r.has_value()) {
          run.push_back(*c->r);
          ++defined;
        }
      }
      dt.complete = defined == static_cast<int>(table.size_classes.size());
      dt.non_increasing = run.size() >= 2 && std::is_sorted(run.rbegin(), run.rend());
      t.density_trends.push_back(std::move(dt));
    }

    for (const std::string& s : table.size_classes) {
      SizeSignPattern sp;
      sp.size_class = s;
      for (const std::string& d : table.density_classes) {
        const CorrelationCell* c = table.find(s, d, measure);
        if (!c || !c->r.has_value())
          sp.signs += '?';
        else if (*c->r > 0)
          sp.signs += '+';
        else if (*c->r < 0)
          sp.signs += '-';
        else
          sp.signs += '0';
      }
      t.size_patterns.push_back(std::move(sp));
    }
    rep.measures.push_back(std::move(t));
  }

  // ranking within the largest, densest stratum
  for (const char* measure : kMeasureNames) {
    const CorrelationCell* c =
        table.find(rep.extreme_size_class, rep.extreme_density_class, measure);
    StratumRank sr;
    sr.measure = measure;
    if (c && c->r.has_value()) sr.r = *c->r;
    rep.extreme_ranking.push_back(std::move(sr));
  }
  std::stable_sort(rep.extreme_ranking.begin(), rep.extreme_ranking.end(),
                   [](const StratumRank& a, const StratumRank& b) {
                     if (a.r.has_value() != b.r.has_value()) return a.r.has_value();
                     if (!a.r) return false;
                     return *a.r > *b.r;
                   });
  for (std::size_t i = 0; i < rep.extreme_ranking.size(); ++i) {
    const StratumRank& sr = rep.extreme_ranking[i];
    if (!sr.r) continue;
    if (sr.measure == "community") rep.community_rank = static_cast<int>(i) + 1;
    if (sr.measure == "betweenness") rep.betweenness_rank = static_cast<int>(i) + 1;
  }
  return rep;
}

// ---- report files ------------------------------------------------------------

std::string correlations_csv(const CorrelationTable& table) {
  std::string out = "stratum_size,stratum_density,measure,r,n,status\n";
  for (const CorrelationCell& c : table.cells) {
    out += csv_escape(c.size_class);
    out += ',';
    out += csv_escape(c.density_class);
    out += ',';
    out += csv_escape(c.measure);
    out += ',';
    if (c.r.has_value()) out += format_double(*c.r);
    out += ',';
    out += std::to_string(c.n);
    out += ',';
    out += csv_escape(c.status);
    out += '\n';
  }
  return out;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Diverging scale: -1 deep blue, 0 near-white, +1 deep red.
std::string cell_color(double r) {
  auto lerp = [](int a, int b, double t) {
    return static_cast<int>(std::lround(a + (b - a) * t));
  };
  int lo[3] = {0x21, 0x66, 0xac};
  int mid[3] = {0xf7, 0xf7, 0xf7};
  int hi[3] = {0xb2, 0x18, 0x2b};
  double t = std::clamp(r, -1.0, 1.0);
  int rgb[3];
  for (int i = 0; i < 3; ++i)
    rgb[i] = t < 0 ? lerp(mid[i], lo[i], -t) : lerp(mid[i], hi[i], t);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

}  // namespace

std::string heatmap_svg(const CorrelationTable& table) {
  const int cell_w = 72, cell_h = 34;
  const int left = 84, top = 34, pad = 8;
  const int cols = static_cast<int>(kMeasureNames.size());
  const int rows =
      static_cast<int>(table.size_classes.size() * table.density_classes.size());
  const int width = left + cols * cell_w + pad;
  const int height = top + rows * cell_h + pad;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  svg +=
      "  <defs>\n"
      "    <pattern id=\"missing\" width=\"6\" height=\"6\" "
      "patternUnits=\"userSpaceOnUse\">\n"
      "      <rect width=\"6\" height=\"6\" fill=\"#ececec\"/>\n"
      "      <path d=\"M0 6 L6 0\" stroke=\"#9a9a9a\" stroke-width=\"1\"/>\n"
      "    </pattern>\n"
      "  </defs>\n";
  svg += "  <rect width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"#ffffff\"/>\n";

  for (int mi = 0; mi < cols; ++mi) {
    int cx = left + mi * cell_w + cell_w / 2;
    svg += "  <text x=\"" + std::to_string(cx) + "\" y=\"" + std::to_string(top - 12) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "fill=\"#222222\">" +
           kMeasureNames[mi] + "</text>\n";
  }

  int row = 0;
  for (const std::string& s : table.size_classes)
    for (const std::string& d : table.density_classes) {
      int y = top + row * cell_h;
      svg += "  <text x=\"" + std::to_string(left - 8) + "\" y=\"" +
             std::to_string(y + cell_h / 2 + 4) +
             "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" "
             "fill=\"#222222\">" +
             s + " " + d + "</text>\n";
      for (int mi = 0; mi < cols; ++mi) {
        const CorrelationCell* c = table.find(s, d, kMeasureNames[mi]);
        int x = left + mi * cell_w;
        bool defined = c && c->r.has_value();
        std::string fill = defined ? cell_color(*c->r) : std::string("url(#missing)");
        svg += "  <rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
               "\" width=\"" + std::to_string(cell_w) + "\" height=\"" +
               std::to_string(cell_h) + "\" fill=\"" + fill +
               "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
        std::string label = defined ? fmt("%.2f", *c->r) : std::string("n/a");
        std::string text_fill =
            defined && std::abs(*c->r) > 0.6 ? "#ffffff" : "#222222";
        svg += "  <text x=\"" + std::to_string(x + cell_w / 2) + "\" y=\"" +
               std::to_string(y + cell_h / 2 + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
               "fill=\"" +
               text_fill + "\">" + label + "</text>\n";
      }
      ++row;
    }
  svg += "</svg>\n";
  return svg;
}

std::string findings_markdown(const TrendReport& rep) {
  std::string md = "# Correlation findings\n\n";
  md += "Descriptive summary of the stratified correlation table for this run. It reports\n";
  md += "whether each expected pattern holds here; nothing below is asserted.\n\n";
  md += rep.complete ? "All table cells are defined.\n\n"
                     : "Some table cells are missing; trends below are computed on the "
                       "available cells only.\n\n";

  md += "## Strength check (threshold " + fmt("%.2f", rep.threshold) + ")\n\n";
  md += "| measure | defined cells | min r | all cells >= threshold |\n";
  md += "|---|---|---|---|\n";
  for (const MeasureTrend& t : rep.measures) {
    md += "| " + t.measure + " | " + std::to_string(t.defined_cells) + "/" +
          std::to_string(t.total_cells) + " | ";
    md += t.min_r ? fmt("%.4f", *t.min_r) : std::string("n/a");
    md += " | ";
    md += t.all_at_least_threshold ? "yes" : "no";
    md += " |\n";
  }
  md += "\n";

  md += "## Size trend per density class\n\n";
  md += "Whether r is monotonically non-increasing across size classes (smallest to\n";
  md += "largest) within each density class. Columns marked incomplete have missing\n";
  md += "cells and were judged on the defined cells only.\n\n";
  md += "| measure |";
  for (const DensityTrend& dt : rep.measures.front().density_trends)
    md += " " + dt.density_class + " |";
  md += "\n|---|";
  for (std::size_t i = 0; i < rep.measures.front().density_trends.size(); ++i) md += "---|";
  md += "\n";
  for (const MeasureTrend& t : rep.measures) {
    md += "| " + t.measure + " |";
    for (const DensityTrend& dt : t.density_trends) {
      md += dt.non_increasing ? " yes" : " no";
      if (!dt.complete) md += " (incomplete)";
      md += " |";
    }
    md += "\n";
  }
  md += "\n";

  md += "## Density sign pattern per size class\n\n";
  md += "Sign of r across density classes (low to high) within each size class\n";
  md += "(+ positive, - negative, 0 zero, ? missing).\n\n";
  md += "| measure |";
  for (const SizeSignPattern& sp : rep.measures.front().size_patterns)
    md += " " + sp.size_class + " |";
  md += "\n|---|";
  for (std::size_t i = 0; i < rep.measures.front().size_patterns.size(); ++i) md += "---|";
  md += "\n";
  for (const MeasureTrend& t : rep.measures) {
    md += "| " + t.measure + " |";
    for (const SizeSignPattern& sp : t.size_patterns) md += " `" + sp.signs + "` |";
    md += "\n";
  }
  md += "\n";

  md += "## Ranking in the largest, densest stratum (" + rep.extreme_size_class + " " +
        rep.extreme_density_class + ")\n\n";
  int place = 1;
  for (const StratumRank& sr : rep.extreme_ranking) {
    md += std::to_string(place++) + ". " + sr.measure + " (r = ";
    md += sr.r ? fmt("%.4f", *sr.r) : std::string("n/a");
    md += ")\n";
  }
  md += "\n";
  md += "Community rank: " +
        (rep.community_rank ? std::to_string(rep.community_rank) : std::string("n/a")) +
        " of " + std::to_string(rep.extreme_ranking.size()) + ". ";
  md += "Betweenness rank: " +
        (rep.betweenness_rank ? std::to_string(rep.betweenness_rank) : std::string("n/a")) +
        " of " + std::to_string(rep.extreme_ranking.size()) + ".\n";
  return md;
}

void emit_report(const CorrelationTable& table, const std::filesystem::path& report_dir,
                 double threshold) {
  std::filesystem::create_directories(report_dir);
  TrendReport rep = trend_report(table, threshold);
  write_file_atomic(report_dir / "correlations.csv", correlations_csv(table));
  write_file_atomic(report_dir / "heatmap.svg", heatmap_svg(table));
  write_file_atomic(report_dir / "findings.md", findings_markdown(rep));
}

}  // namespace graphsim
