#pragma once

#include <cstddef>
#include <vector>

#include "nhfrac/space.hpp"
#include "nhfrac/space_checks.hpp"

namespace nhfrac {

// Per-canonical-ball data shared by the maximal operators, RBMO and the
// Orlicz oscillation norm: (6, beta_6)-doubling flags, the smallest doubling
// dilate B~ of every ball, and realized counts of the 2- and 6-dilates.
// Ball ids are positions in Space::canonical_balls().
class BallIndex {
 public:
  BallIndex(const Space& space, double beta6);
  BallIndex(const Space& space, const SpaceConstants& constants);

  const Space& space() const { return *space_; }
  double beta6() const { return beta6_; }
  std::size_t size() const { return balls_.size(); }
  const CanonicalBall& ball(std::size_t id) const { return balls_[id]; }

  bool doubling(std::size_t id) const { return doubling_[id] != 0; }
  const Ball& tilde(std::size_t id) const { return tilde_[id]; }
  std::size_t tilde_count(std::size_t id) const { return tilde_count_[id]; }
  std::size_t count2(std::size_t id) const { return count2_[id]; }
  std::size_t count6(std::size_t id) const { return count6_[id]; }
  // Realized count of rho * B (cached for rho = 2, 6).
  std::size_t dilated_count(std::size_t id, double rho) const;
  double dilated_mass(std::size_t id, double rho) const;

 private:
  const Space* space_;
  double beta6_;
  std::span<const CanonicalBall> balls_;
  std::vector<char> doubling_;
  std::vector<Ball> tilde_;
  std::vector<std::size_t> tilde_count_;
  std::vector<std::size_t> count2_;
  std::vector<std::size_t> count6_;
};

// Per-center prefix sums of f w (or any per-point values) in neighbor order:
// result[c * (n + 1) + k] = sum of the first k neighbors of c.
std::vector<double> neighbor_prefix_sums(const Space& space, const std::vector<double>& per_point);

// For per-ball values v, returns at each x the max over canonical balls
// containing x; `witness` (optional) receives the maximizing ball id.
std::vector<double> sup_over_containing(const Space& space, const std::vector<double>& per_ball,
                                        std::vector<std::size_t>* witness = nullptr);

}  // namespace nhfrac
