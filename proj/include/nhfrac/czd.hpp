#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nhfrac/operators.hpp"
#include "nhfrac/space_checks.hpp"

namespace nhfrac {

struct CZOptions {
  // 0 selects 1.01 * max{C_lambda^{3 log2 6}, 6^{3n}}.
  double gamma0 = 0.0;
  // Refuse levels t at or below gamma0^{1/p} ||f||_p / mu(X)^{1/p}. When off,
  // points whose averages never drop below the threshold get the whole space.
  bool enforce_t_precondition = true;
};

// omega_j restricted to its support (the points of 6 B_j).
struct PartitionPiece {
  std::vector<std::size_t> points;
  std::vector<double> values;
};

struct CZDecomposition {
  double t = 0.0;
  double p = 1.0;
  double gamma0 = 0.0;
  double threshold = 0.0;  // t^p / gamma0
  std::vector<std::size_t> omega_set;  // {|f| > t}
  std::vector<Ball> balls;             // B_j
  std::vector<Ball> doubling;          // R_j
  std::vector<PartitionPiece> omega;   // omega_j
  std::vector<double> phi_coeff;       // phi_j = phi_coeff[j] on realized R_j
  FunctionVec g;
  FunctionVec h;
  bool whole_space_fallback = false;   // some point needed the whole space (precondition off)

  // Measured constants.
  double gamma = 0.0;        // max_x sum_j |phi_j(x)| / t
  double c_phi_inf = 0.0;     // max_j ||phi_j||_inf mu(R_j) / sum |f omega_j| w
  double c_phi_lp = 0.0;     // fitted C in (int_R |phi_j|^p)^{1/p} mu(R_j)^{1/p'} <= C t^{1-p} int |f omega_j|^p
};

CZDecomposition cz_decompose(const Space& space, const SpaceConstants& constants, const FunctionVec& f, double p,
                             double t, const CZOptions& opts = {});

double default_gamma0(const SpaceConstants& constants);

// Ratio A(s) = sum_{B(x,s)} |f|^p w / mu(B(x, 36 s)) used for the radius choice.
double cz_average(const Space& space, const FunctionVec& f, double p, std::size_t x, double s);

// Realized phi_j as a function.
FunctionVec cz_phi(const Space& space, const CZDecomposition& cz, std::size_t j);

struct CZCheck {
  bool passed = true;
  std::vector<std::string> failures;
};

// Asserts the exact postconditions: f = g + h, disjoint B_j, Omega covered
// by the 6 B_j, strict level condition on each B_j, partition of unity,
// int phi_j = int f omega_j, |phi_j| mu(R_j) <= int |f omega_j|, sum h w = 0.
CZCheck verify_cz(const Space& space, const FunctionVec& f, const CZDecomposition& cz);

struct AtomicParts {
  FunctionVec a1;
  Ball b1{};
  double lambda1 = 0.0;
  FunctionVec a2;
  Ball b2{};
  double lambda2 = 0.0;
};

struct BlockCondition {
  std::string name;
  bool passed = true;
  double slack = 0.0;  // bound minus measured value (non-negative when passing)
};

struct AtomicBlockReport {
  double block_norm = 0.0;
  bool passed = true;
  std::vector<BlockCondition> conditions;
};

// p = infinity is allowed (the L^infinity reading of the size condition).
AtomicBlockReport validate_atomic_block(const Space& space, const FunctionVec& b, const Ball& ball,
                                        const AtomicParts& parts, double p, double rho = 2.0);

struct AtomicBlock {
  FunctionVec b;
  Ball ball{};
  AtomicParts parts;
};

// b = chi_{B1}/mu(B1) - chi_{B2}/mu(B2) split as lambda_j a_j with a_j at the
// L^infinity size bound. B1 and B2 must be geometrically nested in B.
AtomicBlock make_atomic_block(const Space& space, const Ball& ball, const Ball& b1, const Ball& b2,
                              double rho = 2.0);

}  // namespace nhfrac
