#pragma once

#include <cstddef>
#include <vector>

#include "nhfrac/ball_index.hpp"
#include "nhfrac/operators.hpp"

namespace nhfrac {

// sup_{Q ∋ x} [ (1/mu(rho Q)) sum_Q |f|^r w ]^{1/r}
FunctionVec maximal_Mr_rho(const Space& space, const FunctionVec& f, double r, double rho);

// sup over (6, beta_6)-doubling Q ∋ x of m_Q(|f|); the small balls {x} count.
FunctionVec maximal_N(const BallIndex& index, const FunctionVec& f);

// sup_{Q ∋ x} [ mu(rho Q)^{-(1 - alpha p)} sum_Q |f|^p w ]^{1/p}
FunctionVec maximal_M_alpha(const Space& space, const FunctionVec& f, double p, double rho, double alpha);

// Per canonical ball: (1/mu(rho B)) sum_B |f - m_{B~} f| w.
std::vector<double> oscillation_per_ball(const BallIndex& index, const FunctionVec& f, double rho);

// Per canonical ball Q: max over doubling R containing Q (as sets) of
// |m_Q f - m_R f| / divisor, 0 for non-doubling Q. The divisor is K_{Q,R}
// when alpha == 0 and K~^{(alpha)}_{Q,R} otherwise.
struct PairTerm {
  std::vector<double> value;
  std::vector<std::size_t> partner;  // maximizing R (ball id); meaningful when value > 0
};

struct PairOptions {
  double alpha = 0.0;
  // Only the overall maximum is wanted: balls that cannot beat it are skipped
  // and their entries are left as lower bounds.
  bool max_only = false;
};

PairTerm pair_term_per_ball(const BallIndex& index, const FunctionVec& f, const PairOptions& opts = {});

// Sharp maximal function: term (a) with mu(6B) plus term (b) over doubling pairs.
FunctionVec sharp_maximal(const BallIndex& index, const FunctionVec& f, double alpha);

}  // namespace nhfrac
