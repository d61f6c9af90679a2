#pragma once

#include <cstddef>
#include <limits>

#include "nhfrac/ball_index.hpp"
#include "nhfrac/operators.hpp"
#include "nhfrac/orlicz.hpp"

namespace nhfrac {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// (sum |f|^p w)^{1/p}; p = infinity gives max |f|.
double lp_norm(const Space& space, const FunctionVec& f, double p);

// max_k t_k mu(|f| >= t_k)^{1/p} over the distinct values t_k of |f|.
double weak_lp(const Space& space, const FunctionVec& f, double p);

// inf{t > 0 : sum Phi(|f|/t) w <= 1}
double luxemburg_norm(const Space& space, const FunctionVec& f, const OrliczFn& phi);

double mean_on_ball(const Space& space, const FunctionVec& f, const Ball& ball);

struct RbmoEstimate {
  double value = 0.0;
  double rho = 2.0;
  double oscillation = 0.0;  // term (a)
  double regularity = 0.0;   // term (b)
  Ball witness_ball{};       // maximizer of (a)
  Ball witness_q{}, witness_r{};  // maximizing doubling pair of (b)
};

// max of (a) sup_B (1/mu(rho B)) sum_B |f - m_{B~} f| w and
// (b) sup over doubling Q in R of |m_Q f - m_R f| / K_{Q,R}.
RbmoEstimate rbmo_norm(const BallIndex& index, const FunctionVec& f, double rho = 2.0);

// sup_B [ (1/mu(rho B)) sum_B |f - m_{B~} f|^r w ]^{1/r}
double oscillation_r(const BallIndex& index, const FunctionVec& f, double r, double rho);

struct OscEstimate {
  double value = 0.0;
  double exp_term = 0.0;    // term (a)
  double regularity = 0.0;  // term (b), same as for RBMO
  Ball witness_ball{};
};

// Osc_{exp L^r}: max of the per-ball exponential Luxemburg value and the RBMO pair term.
OscEstimate osc_exp_norm(const BallIndex& index, const FunctionVec& f, double r);

}  // namespace nhfrac
