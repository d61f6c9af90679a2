#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "nhfrac/rng.hpp"
#include "nhfrac/space.hpp"

namespace nhfrac {

// Coefficient with its audit trail. `terms` holds the per-k summands of the
// discrete variants (empty for K).
struct CoefficientValue {
  double value = 1.0;
  int n_bs = 0;
  std::vector<double> terms;
};

// d(c_B, c_S) + r_B <= r_S
bool geometrically_nested(const Space& space, const Ball& b, const Ball& s);
// realized(B) is a subset of realized(S)
bool set_contained(const Space& space, const Ball& b, const Ball& s);

// eta^j B for the smallest j >= 0 with mu(eta * eta^j B) <= beta * mu(eta^j B).
Ball smallest_doubling_ball(const Space& space, const Ball& b, double eta, double beta);

// eta^{3 max(n, nu)} + 30^n + 30^nu
double beta_eta(double eta, double n, double nu);

// Smallest N >= 0 with 6^N r_B >= r_S.
int n_bs(double r_b, double r_s);

CoefficientValue coeff_K(const Space& space, const Ball& b, const Ball& s);
CoefficientValue coeff_K_tilde(const Space& space, const Ball& b, const Ball& s);
CoefficientValue coeff_K_tilde_alpha(const Space& space, const Ball& b, const Ball& s, double alpha);

// Greedy disjoint selection: descending radius, then ascending center; a ball
// is kept iff its realized set misses every kept realized set.
std::vector<Ball> vitali_select(const Space& space, const std::vector<Ball>& balls,
                                double dilation = 1.0);

// Random triples B within R within S (geometric nesting). With `concentric`
// all three share a center. Radii are drawn from the canonical radii of the
// chosen centers, so the triples hit realized-set boundaries.
std::vector<std::array<Ball, 3>> sample_nested_triples(const Space& space, std::size_t count,
                                                       Rng& rng, bool concentric);

}  // namespace nhfrac
