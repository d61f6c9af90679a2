#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nhfrac/space.hpp"

namespace nhfrac {

// How structural checks sample centers, radii and pairs. Below
// `exhaustive_limit` points every center (and pair) is visited.
struct SamplePlan {
  int radii_per_decade = 32;
  std::size_t exhaustive_limit = 256;
  std::size_t max_centers = 256;
  std::size_t max_pairs = 20000;
  std::size_t max_balls = 4096;
  std::uint64_t seed = 1;
};

struct UpperDoublingViolation {
  std::size_t center = 0;
  double radius = 0.0;
  double mass = 0.0;
  double lambda = 0.0;
};

struct UpperDoublingReport {
  bool passed = true;
  double c_lambda = 1.0;  // fitted max of lambda(x, r) / lambda(x, r/2)
  std::size_t witness_center = 0;
  double witness_radius = 0.0;
  std::vector<UpperDoublingViolation> violations;
};

struct RegularityReport {
  double constant = 1.0;  // fitted C with lambda(x,r) <= C lambda(y,r) for d(x,y) <= r
  std::size_t witness_x = 0;
  std::size_t witness_y = 0;
  double witness_radius = 0.0;
};

struct GeometricDoublingReport {
  std::size_t n0 = 1;      // largest greedy half-radius cover observed
  double n = 0.0;          // log2(n0)
  Ball witness{};
  std::size_t balls_checked = 0;
};

struct ReverseDoublingRow {
  double a = 0.0;
  double c_a = 0.0;          // inf of lambda(x, a r) / lambda(x, r)
  double partial_sum = 0.0;  // sum_{k=1}^{k_max} C(a^k)^{-eps}
  double last_term = 0.0;
  bool converges = false;
};

struct ReverseDoublingReport {
  double epsilon = 0.0;
  std::vector<ReverseDoublingRow> rows;
  bool passed = false;
};

struct ReverseDoublingOptions {
  int k_max = 60;
  double tail_threshold = 1e-6;
};

struct WeakGrowthRow {
  double epsilon = 0.0;
  double constant = 0.0;
};

struct WeakGrowthReport {
  double constant = 0.0;
  double epsilon = 0.0;
  bool flagged = false;  // fitted constant above the configured flag level
  std::vector<WeakGrowthRow> table;
};

struct WeakGrowthOptions {
  std::vector<double> epsilon_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int t_steps = 8;
  double flag_above = 10.0;
};

struct SpaceConstants {
  double c_lambda = 1.0;
  double c_lambda_tilde = 1.0;
  std::size_t n0 = 1;
  double n = 0.0;   // log2 n0
  double nu = 0.0;  // log2 c_lambda
  bool upper_doubling_passed = true;
  std::vector<std::string> notes;
};

UpperDoublingReport check_upper_doubling(const Space& space, const SamplePlan& plan = {});
RegularityReport check_lambda_regularity(const Space& space, const SamplePlan& plan = {});
GeometricDoublingReport check_geometric_doubling(const Space& space, const SamplePlan& plan = {});
ReverseDoublingReport check_weak_reverse_doubling(const Space& space, double epsilon,
                                                  const std::vector<double>& a_grid,
                                                  const ReverseDoublingOptions& opts = {},
                                                  const SamplePlan& plan = {});
WeakGrowthReport check_weak_growth(const Space& space, const WeakGrowthOptions& opts = {},
                                   const SamplePlan& plan = {});

// Runs the upper-doubling, regularity and geometric-doubling checks.
SpaceConstants fit_space_constants(const Space& space, const SamplePlan& plan = {});

// Greedy max-coverage cover of `ball`'s realized set by balls of half its
// radius centered at its own points; returns the number of covering balls.
std::size_t greedy_half_cover(const Space& space, const Ball& ball);

}  // namespace nhfrac
