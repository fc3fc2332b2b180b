#include "graphsim/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "graphsim/errors.hpp"

namespace graphsim {

void validate_prob(const std::vector<double>& p) {
  if (p.empty())
    throw MeasureError(MeasureErrorKind::invalid_distribution, "empty distribution");
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0)
      throw MeasureError(MeasureErrorKind::invalid_distribution,
                         "distribution entry negative or non-finite");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw MeasureError(MeasureErrorKind::invalid_distribution,
                       "distribution does not sum to 1");
}

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw MeasureError(MeasureErrorKind::length_mismatch,
                       "distributions have different lengths");
  validate_prob(p);
  validate_prob(q);

  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i], qi = q[i];
    const double mi = 0.5 * (pi + qi);
    if (pi > 0.0) acc += 0.5 * pi * std::log2(pi / mi);
    if (qi > 0.0) acc += 0.5 * qi * std::log2(qi / mi);
  }
  return std::clamp(acc, 0.0, 1.0);
}

std::vector<double> bin_unit_values(const std::vector<double>& values, int bins) {
  if (bins < 1)
    throw MeasureError(MeasureErrorKind::invalid_distribution, "bin count must be >= 1");
  if (values.empty())
    throw MeasureError(MeasureErrorKind::invalid_distribution, "no values to bin");
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  const double weight = 1.0 / static_cast<double>(values.size());
  for (double v : values) {
    const double snapped = std::round(v * 1e12) / 1e12;
    if (!(snapped >= 0.0 && snapped <= 1.0))
      throw MeasureError(MeasureErrorKind::invalid_distribution,
                         "value outside [0,1] cannot be binned");
    int idx = static_cast<int>(std::floor(snapped * bins));
    if (idx >= bins) idx = bins - 1;  // closed last bin
    hist[static_cast<std::size_t>(idx)] += weight;
  }
  return hist;
}

namespace {

// 1 - jsd after zero-padding both vectors to the longer length.
double one_minus_padded_jsd(std::vector<double> p, std::vector<double> q) {
  const std::size_t len = std::max(p.size(), q.size());
  p.resize(len, 0.0);
  q.resize(len, 0.0);
  return 1.0 - jsd(p, q);
}

double linear_density(const FeatureProfile& a) {
  if (a.node_count <= 0)
    throw MeasureError(MeasureErrorKind::undefined_measure, "profile with no nodes");
  return static_cast<double>(a.edge_count) / a.node_count;
}

}  // namespace

double sim_size(const FeatureProfile& a, const FeatureProfile& b) {
  if (a.node_count <= 0 || b.node_count <= 0)
    throw MeasureError(MeasureErrorKind::undefined_measure, "size undefined for empty graph");
  const double n1 = a.node_count, n2 = b.node_count;
  return 1.0 - std::abs(n1 - n2) / std::max(n1, n2);
}

double sim_density(const FeatureProfile& a, const FeatureProfile& b) {
  const double d1 = linear_density(a), d2 = linear_density(b);
  const double hi = std::max(d1, d2);
  if (hi == 0.0)
    throw MeasureError(MeasureErrorKind::undefined_measure,
                       "density comparison undefined when both graphs are edgeless");
  return 1.0 - std::abs(d1 - d2) / hi;
}

double sim_degree(const FeatureProfile& a, const FeatureProfile& b) {
  return one_minus_padded_jsd(a.degree_dist, b.degree_dist);
}

double sim_clustering(const FeatureProfile& a, const FeatureProfile& b,
                      const MeasureOptions& opts) {
  return 1.0 - jsd(bin_unit_values(a.clustering_values, opts.bins),
                   bin_unit_values(b.clustering_values, opts.bins));
}

double sim_betweenness(const FeatureProfile& a, const FeatureProfile& b,
                       const MeasureOptions& opts) {
  return 1.0 - jsd(bin_unit_values(a.betweenness_values, opts.bins),
                   bin_unit_values(b.betweenness_values, opts.bins));
}

double sim_community(const FeatureProfile& a, const FeatureProfile& b) {
  return one_minus_padded_jsd(a.community_sizes, b.community_sizes);
}

SimilarityVector similarity_vector(const FeatureProfile& a, const FeatureProfile& b,
                                   const MeasureOptions& opts) {
  SimilarityVector v;
  v.size = sim_size(a, b);
  v.density = sim_density(a, b);
  v.degree = sim_degree(a, b);
  v.clustering = sim_clustering(a, b, opts);
  v.betweenness = sim_betweenness(a, b, opts);
  v.community = sim_community(a, b);
  return v;
}

SimilarityVector similarity_vector(const Graph& a, const Graph& b, const MeasureOptions& opts) {
  return similarity_vector(compute_features(a), compute_features(b), opts);
}

}  // namespace graphsim
