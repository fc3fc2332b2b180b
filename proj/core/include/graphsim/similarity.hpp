// The six pairwise similarity measures: size, linear density, and
// Jensen-Shannon-based comparisons of degree, clustering, betweenness and
// community-size distributions. Each measure maps a pair of feature profiles
// to [0,1], where 1 means indistinguishable under that measure.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "graphsim/features.hpp"
#include "graphsim/graph.hpp"

namespace graphsim {

// Throws MeasureError unless entries are finite, non-negative, and sum to
// 1 ± 1e-9.
void validate_prob(const std::vector<double>& p);

// Jensen-Shannon divergence, base-2 logarithms (range [0,1]), 0·log0 := 0.
// Throws MeasureError on length mismatch or invalid distribution.
double jsd(const std::vector<double>& p, const std::vector<double>& q);

// Histogram of values in [0,1] over `bins` equal-width bins, normalized to a
// probability vector. The last bin is closed ([1-1/B, 1]); values are snapped
// to 1e-12 resolution first so representation noise cannot flip a bin.
std::vector<double> bin_unit_values(const std::vector<double>& values, int bins);

struct MeasureOptions {
  int bins = 20;  // Cc/Bc histogram resolution
};

struct SimilarityVector {
  double size = 0.0;
  double density = 0.0;
  double degree = 0.0;
  double clustering = 0.0;
  double betweenness = 0.0;
  double community = 0.0;

  std::array<double, 6> as_array() const {
    return {size, density, degree, clustering, betweenness, community};
  }
  double mean() const {
    return (size + density + degree + clustering + betweenness + community) / 6.0;
  }
};

// Column order matches SimilarityVector::as_array.
inline constexpr std::array<const char*, 6> kMeasureNames = {
    "size", "density", "degree", "clustering", "betweenness", "community"};

double sim_size(const FeatureProfile& a, const FeatureProfile& b);
// Undefined (MeasureError) when both linear densities are 0.
double sim_density(const FeatureProfile& a, const FeatureProfile& b);
// Degree histograms zero-padded to the union support, then 1 - jsd.
double sim_degree(const FeatureProfile& a, const FeatureProfile& b);
double sim_clustering(const FeatureProfile& a, const FeatureProfile& b,
                      const MeasureOptions& opts = {});
double sim_betweenness(const FeatureProfile& a, const FeatureProfile& b,
                       const MeasureOptions& opts = {});
// Sorted relative community sizes zero-padded to equal length, then 1 - jsd.
double sim_community(const FeatureProfile& a, const FeatureProfile& b);

SimilarityVector similarity_vector(const FeatureProfile& a, const FeatureProfile& b,
                                   const MeasureOptions& opts = {});
// Convenience: computes both profiles first.
SimilarityVector similarity_vector(const Graph& a, const Graph& b,
                                   const MeasureOptions& opts = {});

}  // namespace graphsim
