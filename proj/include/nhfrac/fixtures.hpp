#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhfrac/operators.hpp"
#include "nhfrac/space.hpp"

namespace nhfrac {

// n points x_i = i * spacing on a line with PowerLaw(c0, kappa).
// spacing <= 0 means 1 / (n - 1) (the unit interval); point_mass <= 0 means
// 1 / n; c0 <= 0 fits the smallest c0 passing upper doubling. weight_spread > 1
// draws log-uniform weights in [1, weight_spread] (seeded) rescaled to the
// same total mass.
struct DyadicLineSpec {
  std::size_t n = 64;
  double kappa = 1.0;
  double c0 = 2.0;
  double spacing = 0.0;
  double point_mass = 0.0;
  double weight_spread = 1.0;
  std::uint64_t seed = 1;
};

// Left endpoints of the 2^level middle-thirds intervals, uniform weights,
// PowerLaw(c0, log 2 / log 3) with c0 fitted when c0 <= 0.
struct CantorSpec {
  int level = 5;
  double c0 = 0.0;
};

// n points in the disc |z| <= 0.9 of C (the first at the origin), the
// complex-ball quasi-metric and Bergman lambda with exponent m; uniform
// weights scaled so that upper doubling holds.
struct ComplexBallSpec {
  std::size_t n = 32;
  double m = 2.0;
  std::uint64_t seed = 1;
};

// n uniform points in the unit square, log-uniform weights in [0.1, 1]
// (total mass 1), MeasureBased or PowerLaw(c0 fitted, kappa = 2) lambda.
struct RandomMetricSpec {
  std::size_t n = 64;
  std::uint64_t seed = 1;
  bool measure_lambda = true;
};

Space make_dyadic_line(const DyadicLineSpec& spec);
Space make_cantor_like(const CantorSpec& spec);
Space make_complex_ball(const ComplexBallSpec& spec);
Space make_random_metric(const RandomMetricSpec& spec);

// The 3-point line {0, 1, 2}, unit weights, lambda(x, r) = 2r.
Space make_s3();

// Fixture from a config object: {"generator": "dyadic_line" | "cantor" |
// "complex_ball" | "random_metric", ...parameters}. `n_override` (if nonzero)
// replaces the point count for ladder runs.
Space make_space(const nlohmann::json& spec, std::size_t n_override = 0);

// Smallest C0 with mass(B) <= C0 r^kappa over all canonical balls.
double fit_power_c0(const Space& space, double kappa);

struct FamilySpec {
  std::string tag = "indicators";  // indicators | signed | bumps | atoms | random
  std::size_t count = 8;
  std::uint64_t seed = 1;
  bool mean_zero = false;
  double normalize_p = 0.0;        // > 0: rescale to unit L^p norm
};

struct NamedFunction {
  std::string id;
  FunctionVec f;
};

std::vector<NamedFunction> make_function_family(const Space& space, const FamilySpec& spec);

}  // namespace nhfrac
