#include "graphsim/layout.hpp"

#include <algorithm>
#include <cmath>

#include "graphsim/errors.hpp"
#include "graphsim/rng.hpp"

namespace graphsim {

namespace {

double fr_energy(const Graph& g, const std::vector<std::pair<double, double>>& pos, double k) {
  const int n = g.node_count();
  double e = 0.0;
  for (const Edge& ed : g.edges()) {
    const double dx = pos[static_cast<std::size_t>(ed.first)].first -
                      pos[static_cast<std::size_t>(ed.second)].first;
    const double dy = pos[static_cast<std::size_t>(ed.first)].second -
                      pos[static_cast<std::size_t>(ed.second)].second;
    const double d = std::sqrt(dx * dx + dy * dy);
    e += d * d * d / (3.0 * k);
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const double dx = pos[static_cast<std::size_t>(u)].first -
                        pos[static_cast<std::size_t>(v)].first;
      const double dy = pos[static_cast<std::size_t>(u)].second -
                        pos[static_cast<std::size_t>(v)].second;
      const double d = std::sqrt(dx * dx + dy * dy);
      e -= k * k * std::log(std::max(d, 1e-12));
    }
  return e;
}

}  // namespace

Layout fr_layout(const Graph& g, int iterations, std::uint64_t seed) {
  if (iterations < 1) throw ParamError("fr_layout: iterations must be >= 1");
  const int n = g.node_count();

  Layout layout;
  layout.positions.assign(static_cast<std::size_t>(n), {0.5, 0.5});
  if (n == 1) return layout;

  auto& pos = layout.positions;
  Rng rng(seed);
  for (auto& p : pos) {
    p.first = rng.next_double();
    p.second = rng.next_double();
  }

  const double k = std::sqrt(1.0 / n);
  const double t0 = 0.1;
  constexpr double eps = 1e-9;
  std::vector<std::pair<double, double>> disp(static_cast<std::size_t>(n));

  for (int it = 0; it < iterations; ++it) {
    std::fill(disp.begin(), disp.end(), std::pair<double, double>{0.0, 0.0});

    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        double dx = pos[static_cast<std::size_t>(u)].first - pos[static_cast<std::size_t>(v)].first;
        double dy = pos[static_cast<std::size_t>(u)].second - pos[static_cast<std::size_t>(v)].second;
        double d = std::max(std::sqrt(dx * dx + dy * dy), eps);
        double f = k * k / d / d;  // (k^2/d) applied along the unit vector
        disp[static_cast<std::size_t>(u)].first += dx * f;
        disp[static_cast<std::size_t>(u)].second += dy * f;
        disp[static_cast<std::size_t>(v)].first -= dx * f;
        disp[static_cast<std::size_t>(v)].second -= dy * f;
      }

    for (const Edge& ed : g.edges()) {
      const int u = ed.first, v = ed.second;
      double dx = pos[static_cast<std::size_t>(u)].first - pos[static_cast<std::size_t>(v)].first;
      double dy = pos[static_cast<std::size_t>(u)].second - pos[static_cast<std::size_t>(v)].second;
      double d = std::max(std::sqrt(dx * dx + dy * dy), eps);
      double f = d / k;  // (d^2/k) along the unit vector
      disp[static_cast<std::size_t>(u)].first -= dx * f;
      disp[static_cast<std::size_t>(u)].second -= dy * f;
      disp[static_cast<std::size_t>(v)].first += dx * f;
      disp[static_cast<std::size_t>(v)].second += dy * f;
    }

    const double t = t0 * static_cast<double>(iterations - it) / iterations;
    for (int v = 0; v < n; ++v) {
      double dx = disp[static_cast<std::size_t>(v)].first;
      double dy = disp[static_cast<std::size_t>(v)].second;
      double len = std::sqrt(dx * dx + dy * dy);
      if (len <= eps) continue;
      double step = std::min(len, t);
      pos[static_cast<std::size_t>(v)].first += dx / len * step;
      pos[static_cast<std::size_t>(v)].second += dy / len * step;
    }

    if (it == 0) layout.energy_first = fr_energy(g, pos, k);
  }
  layout.energy_final = fr_energy(g, pos, k);

  // uniform, centered rescale into [0,1]^2
  double min_x = pos[0].first, max_x = pos[0].first;
  double min_y = pos[0].second, max_y = pos[0].second;
  for (const auto& p : pos) {
    min_x = std::min(min_x, p.first);
    max_x = std::max(max_x, p.first);
    min_y = std::min(min_y, p.second);
    max_y = std::max(max_y, p.second);
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  if (span <= eps) {
    for (auto& p : pos) p = {0.5, 0.5};
    return layout;
  }
  const double cx = 0.5 * (min_x + max_x), cy = 0.5 * (min_y + max_y);
  for (auto& p : pos) {
    p.first = std::clamp((p.first - cx) / span + 0.5, 0.0, 1.0);
    p.second = std::clamp((p.second - cy) / span + 0.5, 0.0, 1.0);
  }
  return layout;
}

}  // namespace graphsim
