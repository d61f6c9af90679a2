#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/rng.hpp"
#include "nhfrac/space.hpp"

namespace testutil {

using nhfrac::FunctionVec;
using nhfrac::Space;

inline Space matrix_space(const std::vector<std::vector<double>>& d, const std::vector<double>& w,
                          nhfrac::DominatingFn lambda, const std::string& name = "m") {
  std::vector<nhfrac::PointRecord> pts;
  std::vector<double> flat;
  for (std::size_t i = 0; i < d.size(); ++i) {
    pts.push_back({std::to_string(i), {}, {}});
    flat.insert(flat.end(), d[i].begin(), d[i].end());
  }
  return Space(name, pts, nhfrac::MetricKind::kMatrix, flat, w, lambda);
}

inline Space single_point(double w = 1.0) { return matrix_space({{0.0}}, {w}, nhfrac::PowerLaw{2.0, 1.0}, "single"); }

// Two points at distance 1, unit weights, lambda = 2r.
inline Space two_point() { return matrix_space({{0, 1}, {1, 0}}, {1, 1}, nhfrac::PowerLaw{2.0, 1.0}, "two"); }

// Small fixture number `i` (at most 8 points), cycling through the generators.
inline Space small_fixture(std::size_t i) {
  nhfrac::Rng rng(1000 + i);
  const std::size_t n = 1 + rng.index(8);
  switch (i % 5) {
    case 0: {
      nhfrac::RandomMetricSpec s{n, 100 + i, true};
      return nhfrac::make_random_metric(s);
    }
    case 1: {
      nhfrac::RandomMetricSpec s{n, 100 + i, false};
      return nhfrac::make_random_metric(s);
    }
    case 2: {
      nhfrac::DyadicLineSpec s;
      s.n = std::max<std::size_t>(n, 2);
      s.weight_spread = 1.0 + 9.0 * rng.uniform();
      s.c0 = 0.0;
      s.seed = 200 + i;
      return nhfrac::make_dyadic_line(s);
    }
    case 3: {
      nhfrac::ComplexBallSpec s{n, 2.0, 300 + i};
      return nhfrac::make_complex_ball(s);
    }
    default: {
      nhfrac::CantorSpec s{static_cast<int>(i / 5 % 4), 0.0};
      return nhfrac::make_cantor_like(s);
    }
  }
}

inline FunctionVec random_function(nhfrac::Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  FunctionVec f(n);
  for (auto& v : f) v = rng.uniform(lo, hi);
  return f;
}

inline double max_abs(const FunctionVec& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

// Dyadic line with log-uniform weights spanning `spread`: the lightest points
// carry less than 1 / gamma0 of the mass, so admissible CZ levels can select them.
inline Space skewed_line(std::size_t n, double spread, std::uint64_t seed) {
  nhfrac::DyadicLineSpec s;
  s.n = n;
  s.weight_spread = spread;
  s.c0 = 0.0;
  s.seed = seed;
  return nhfrac::make_dyadic_line(s);
}

// Tiny noise plus `spikes` large values on the lightest points.
inline FunctionVec spiky_function(nhfrac::Rng& rng, const Space& s, std::size_t spikes) {
  const std::size_t n = s.size();
  FunctionVec f = random_function(rng, n, -1e-6, 1e-6);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.weight(a) < s.weight(b); });
  for (std::size_t j = 0; j < spikes; ++j) f[idx[rng.index(std::min<std::size_t>(5, n))]] = 20.0 * (1.0 + rng.uniform());
  return f;
}

// Smallest admissible CZ level for f at exponent p.
inline double cz_min_level(const Space& s, const FunctionVec& f, double p, double gamma0) {
  double total = 0.0;
  for (std::size_t y = 0; y < s.size(); ++y) total += std::pow(std::abs(f[y]), p) * s.weight(y);
  return std::pow(gamma0 * total / s.total_mass(), 1.0 / p);
}

}  // namespace testutil
