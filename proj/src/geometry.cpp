#include "nhfrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nhfrac/error.hpp"

namespace nhfrac {

bool geometrically_nested(const Space& space, const Ball& b, const Ball& s) {
  return space.distance(b.center, s.center) + b.radius <= s.radius;
}

bool set_contained(const Space& space, const Ball& b, const Ball& s) {
  for (std::size_t y : space.members(b))
    if (!space.contains(s, y)) return false;
  return true;
}

Ball smallest_doubling_ball(const Space& space, const Ball& b, double eta, double beta) {
  if (!(eta > 1.0)) throw Error("doubling dilation eta must exceed 1");
  if (!(beta > 1.0)) throw Error("doubling constant beta must exceed 1");
  Ball cur = b;
  const std::size_t n = space.size();
  while (true) {
    const std::size_t inner = space.count_within(cur.center, cur.radius);
    if (inner == n) return cur;
    if (space.mass_within(cur.center, eta * cur.radius) <= beta * space.mass_within(cur.center, cur.radius))
      return cur;
    cur.radius *= eta;
  }
}

double beta_eta(double eta, double n, double nu) {
  if (!(eta > 1.0)) throw Error("beta_eta needs eta > 1");
  return std::pow(eta, 3.0 * std::max(n, nu)) + std::pow(30.0, n) + std::pow(30.0, nu);
}

int n_bs(double r_b, double r_s) {
  int n = 0;
  double r = r_b;
  while (r < r_s) {
    r *= 6.0;
    ++n;
  }
  return n;
}

CoefficientValue coeff_K(const Space& space, const Ball& b, const Ball& s) {
  if (!geometrically_nested(space, b, s)) throw Error("coeff_K: B is not nested in S");
  // Walk c_B's neighbor order so that sums over nested regions are formed in
  // the same order (this keeps monotonicity exact in floating point).
  const auto order = space.order(b.center);
  const auto dist = space.sorted_distances(b.center);
  const std::size_t start = space.count_within(b.center, b.radius);
  const double two_rs = 2.0 * s.radius;
  double sum = 0.0;
  for (std::size_t k = start; k < order.size(); ++k) {
    const std::size_t x = order[k];
    if (space.distance(s.center, x) < two_rs) sum += space.weight(x) / space.lambda_at(b.center, dist[k]);
  }
  return CoefficientValue{1.0 + sum, 0, {}};
}

namespace {

CoefficientValue k_tilde_impl(const Space& space, const Ball& b, const Ball& s, double alpha) {
  if (!geometrically_nested(space, b, s)) throw Error("coeff_K_tilde: B is not nested in S");
  CoefficientValue out;
  out.n_bs = n_bs(b.radius, s.radius);
  double r = b.radius;
  double sum = 0.0;
  for (int k = 1; k <= out.n_bs; ++k) {
    r *= 6.0;
    double term = space.mass_within(b.center, r) / space.lambda_at(b.center, r);
    if (alpha != 0.0) term = std::pow(term, 1.0 - alpha);
    out.terms.push_back(term);
    sum += term;
  }
  out.value = 1.0 + sum;
  return out;
}

}  // namespace

CoefficientValue coeff_K_tilde(const Space& space, const Ball& b, const Ball& s) {
  return k_tilde_impl(space, b, s, 0.0);
}

CoefficientValue coeff_K_tilde_alpha(const Space& space, const Ball& b, const Ball& s, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error("coeff_K_tilde_alpha: alpha must lie in [0, 1)");
  return k_tilde_impl(space, b, s, alpha);
}

std::vector<Ball> vitali_select(const Space& space, const std::vector<Ball>& balls, double dilation) {
  if (!(dilation >= 1.0)) throw Error("vitali_select: dilation must be at least 1");
  std::vector<std::size_t> idx(balls.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (balls[a].radius != balls[b].radius) return balls[a].radius > balls[b].radius;
    return balls[a].center < balls[b].center;
  });
  std::vector<char> taken(space.size(), 0);
  std::vector<Ball> kept;
  for (std::size_t i : idx) {
    const auto mem = space.members(balls[i]);
    const bool clash = std::any_of(mem.begin(), mem.end(), [&](std::size_t y) { return taken[y] != 0; });
    if (clash) continue;
    for (std::size_t y : mem) taken[y] = 1;
    kept.push_back(balls[i]);
  }
  return kept;
}

namespace {

// A radius for a ball at `center` that contains a ball needing `needed`.
double pick_radius(const Space& space, std::size_t center, double needed, Rng& rng) {
  std::vector<double> options{needed};
  for (const auto& cb : space.canonical_balls(center))
    if (cb.ball.radius >= needed) options.push_back(cb.ball.radius);
  options.push_back(needed * (1.0 + 3.0 * rng.uniform()));
  return options[rng.index(options.size())];
}

}  // namespace

std::vector<std::array<Ball, 3>> sample_nested_triples(const Space& space, std::size_t count,
                                                       Rng& rng, bool concentric) {
  std::vector<std::array<Ball, 3>> out;
  out.reserve(count);
  const auto all = space.canonical_balls();
  const std::size_t n = space.size();
  while (out.size() < count) {
    const Ball b = all[rng.index(all.size())].ball;
    const std::size_t cr = concentric ? b.center : rng.index(n);
    const Ball r{cr, pick_radius(space, cr, space.distance(b.center, cr) + b.radius, rng)};
    const std::size_t cs = concentric ? b.center : rng.index(n);
    const Ball s{cs, pick_radius(space, cs, space.distance(r.center, cs) + r.radius, rng)};
    if (!geometrically_nested(space, b, r) || !geometrically_nested(space, r, s)) continue;
    // B in S follows mathematically; rounding can break it at the last ulp.
    if (!geometrically_nested(space, b, s)) continue;
    out.push_back({b, r, s});
  }
  return out;
}

}  // namespace nhfrac
