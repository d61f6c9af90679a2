#include "nhfrac/space_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nhfrac/error.hpp"
#include "nhfrac/rng.hpp"

namespace nhfrac {

namespace {

// Deterministic subset of {0..n-1}: everything when small, else a seeded sample.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t limit, std::size_t take,
                                        std::uint64_t seed) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (n <= limit || n <= take) return all;
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) std::swap(all[i], all[i + rng.index(n - i)]);
  all.resize(take);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, const SamplePlan& plan,
                                                              bool include_diagonal) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n * n <= plan.max_pairs) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (include_diagonal || x != y) pairs.emplace_back(x, y);
    return pairs;
  }
  Rng rng(plan.seed ^ 0x9e3779b97f4a7c15ull);
  if (include_diagonal) {
    for (std::size_t x : sample_indices(n, 0, plan.max_centers, plan.seed)) pairs.emplace_back(x, x);
  }
  while (pairs.size() < plan.max_pairs) {
    const std::size_t x = rng.index(n), y = rng.index(n);
    if (x != y) pairs.emplace_back(x, y);
  }
  return pairs;
}

}  // namespace

UpperDoublingReport check_upper_doubling(const Space& space, const SamplePlan& plan) {
  UpperDoublingReport rep;
  for (const auto& cb : space.canonical_balls()) {
    const double lam = space.lambda_at(cb.ball.center, cb.ball.radius);
    if (cb.mass > lam) {
      rep.passed = false;
      rep.violations.push_back({cb.ball.center, cb.ball.radius, cb.mass, lam});
    }
  }
  const auto grid = space.radius_grid(plan.radii_per_decade);
  rep.c_lambda = 0.0;
  for (std::size_t x : sample_indices(space.size(), plan.exhaustive_limit, plan.max_centers, plan.seed)) {
    for (double r : grid) {
      const double ratio = space.lambda_at(x, r) / space.lambda_at(x, r / 2.0);
      if (ratio > rep.c_lambda) {
        rep.c_lambda = ratio;
        rep.witness_center = x;
        rep.witness_radius = r;
      }
    }
  }
  return rep;
}

RegularityReport check_lambda_regularity(const Space& space, const SamplePlan& plan) {
  RegularityReport rep;
  const auto grid = space.radius_grid(plan.radii_per_decade);
  for (const auto& [x, y] : sample_pairs(space.size(), plan, false)) {
    const double d = space.distance(x, y);
    auto eval = [&](double r) {
      const double ratio = space.lambda_at(x, r) / space.lambda_at(y, r);
      if (ratio > rep.constant) {
        rep.constant = ratio;
        rep.witness_x = x;
        rep.witness_y = y;
        rep.witness_radius = r;
      }
    };
    eval(d);
    for (auto it = std::lower_bound(grid.begin(), grid.end(), d); it != grid.end(); ++it) eval(*it);
  }
  return rep;
}

std::size_t greedy_half_cover(const Space& space, const Ball& ball) {
  const auto members = space.members(ball);
  const double half = ball.radius / 2.0;
  std::vector<char> covered(members.size(), 0);
  std::size_t remaining = members.size();
  std::size_t used = 0;
  while (remaining > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      std::size_t gain = 0;
      for (std::size_t j = 0; j < members.size(); ++j)
        if (!covered[j] && space.distance(members[i], members[j]) < half) ++gain;
      if (gain > best_gain || (gain == best_gain && gain > 0 && members[i] < members[best])) {
        best_gain = gain;
        best = i;
      }
    }
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (!covered[j] && space.distance(members[best], members[j]) < half) {
        covered[j] = 1;
        --remaining;
      }
    }
    ++used;
  }
  return used;
}

GeometricDoublingReport check_geometric_doubling(const Space& space, const SamplePlan& plan) {
  GeometricDoublingReport rep;
  const auto balls = space.canonical_balls();
  const auto picks = sample_indices(balls.size(), plan.max_balls, plan.max_balls, plan.seed + 17);
  for (std::size_t i : picks) {
    const std::size_t cover = greedy_half_cover(space, balls[i].ball);
    if (cover > rep.n0) {
      rep.n0 = cover;
      rep.witness = balls[i].ball;
    }
  }
  rep.balls_checked = picks.size();
  rep.n = std::log2(static_cast<double>(rep.n0));
  return rep;
}

ReverseDoublingReport check_weak_reverse_doubling(const Space& space, double epsilon,
                                                  const std::vector<double>& a_grid,
                                                  const ReverseDoublingOptions& opts,
                                                  const SamplePlan& plan) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  const auto grid = space.radius_grid(plan.radii_per_decade);
  const auto centers = sample_indices(space.size(), plan.exhaustive_limit, plan.max_centers, plan.seed);
  auto growth = [&](double a) {
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t x : centers)
      for (double r : grid) inf = std::min(inf, space.lambda_at(x, a * r) / space.lambda_at(x, r));
    return inf;
  };
  ReverseDoublingReport rep;
  rep.epsilon = epsilon;
  rep.passed = !a_grid.empty();
  for (double a : a_grid) {
    if (!(a > 1.0)) throw Error("reverse doubling ratios must exceed 1");
    ReverseDoublingRow row;
    row.a = a;
    row.c_a = growth(a);
    for (int k = 1; k <= opts.k_max; ++k) {
      const double term = std::pow(growth(std::pow(a, k)), -epsilon);
      row.partial_sum += term;
      row.last_term = term;
    }
    row.converges = row.last_term < opts.tail_threshold;
    rep.passed = rep.passed && row.converges;
    rep.rows.push_back(row);
  }
  return rep;
}

WeakGrowthReport check_weak_growth(const Space& space, const WeakGrowthOptions& opts,
                                   const SamplePlan& plan) {
  const auto grid = space.radius_grid(plan.radii_per_decade);
  std::vector<double> best(opts.epsilon_grid.size(), 0.0);
  for (const auto& [x, y] : sample_pairs(space.size(), plan, true)) {
    const double d = space.distance(x, y);
    for (auto it = std::lower_bound(grid.begin(), grid.end(), d); it != grid.end(); ++it) {
      const double r = *it;
      const double base_lambda = space.lambda_at(x, r);
      for (int s = 0; s <= opts.t_steps; ++s) {
        const double t = r * s / opts.t_steps;
        if (d + t == 0.0) continue;
        const double num = std::abs(space.lambda_at(y, r + t) - base_lambda) / base_lambda;
        const double base = (d + t) / r;
        for (std::size_t e = 0; e < best.size(); ++e)
          best[e] = std::max(best[e], num / std::pow(base, opts.epsilon_grid[e]));
      }
    }
  }
  WeakGrowthReport rep;
  rep.constant = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < best.size(); ++e) {
    rep.table.push_back({opts.epsilon_grid[e], best[e]});
    const bool better = best[e] < rep.constant * (1.0 - 1e-12);
    const bool tie = std::abs(best[e] - rep.constant) <= 1e-12 * std::max(1.0, best[e]);
    if (better || (tie && opts.epsilon_grid[e] > rep.epsilon)) {
      rep.constant = best[e];
      rep.epsilon = opts.epsilon_grid[e];
    }
  }
  rep.flagged = rep.constant > opts.flag_above;
  return rep;
}

SpaceConstants fit_space_constants(const Space& space, const SamplePlan& plan) {
  SpaceConstants sc;
  const auto up = check_upper_doubling(space, plan);
  const auto reg = check_lambda_regularity(space, plan);
  const auto geo = check_geometric_doubling(space, plan);
  sc.c_lambda = std::max(1.0, up.c_lambda);
  sc.c_lambda_tilde = reg.constant;
  sc.n0 = geo.n0;
  sc.n = std::log2(static_cast<double>(geo.n0));
  sc.nu = std::log2(sc.c_lambda);
  sc.upper_doubling_passed = up.passed;
  if (!up.passed)
    sc.notes.push_back("upper doubling violated on " + std::to_string(up.violations.size()) + " balls");
  return sc;
}

}  // namespace nhfrac
