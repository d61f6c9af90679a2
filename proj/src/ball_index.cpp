#include "nhfrac/ball_index.hpp"

#include <limits>

#include "nhfrac/error.hpp"
#include "nhfrac/geometry.hpp"

namespace nhfrac {

BallIndex::BallIndex(const Space& space, const SpaceConstants& constants)
    : BallIndex(space, beta_eta(6.0, constants.n, constants.nu)) {}

BallIndex::BallIndex(const Space& space, double beta6)
    : space_(&space), beta6_(beta6), balls_(space.canonical_balls()) {
  const std::size_t m = balls_.size();
  doubling_.resize(m);
  tilde_.resize(m);
  tilde_count_.resize(m);
  count2_.resize(m);
  count6_.resize(m);
  for (std::size_t id = 0; id < m; ++id) {
    const Ball& b = balls_[id].ball;
    count2_[id] = space.count_within(b.center, 2.0 * b.radius);
    count6_[id] = space.count_within(b.center, 6.0 * b.radius);
    doubling_[id] = space.mass_within(b.center, 6.0 * b.radius) <= beta6 * balls_[id].mass;
    tilde_[id] = smallest_doubling_ball(space, b, 6.0, beta6);
    tilde_count_[id] = space.count_within(b.center, tilde_[id].radius);
  }
}

std::size_t BallIndex::dilated_count(std::size_t id, double rho) const {
  if (rho == 2.0) return count2_[id];
  if (rho == 6.0) return count6_[id];
  const Ball& b = balls_[id].ball;
  return space_->count_within(b.center, rho * b.radius);
}

double BallIndex::dilated_mass(std::size_t id, double rho) const {
  const Ball& b = balls_[id].ball;
  return space_->prefix_mass(b.center)[dilated_count(id, rho)];
}

std::vector<double> neighbor_prefix_sums(const Space& space, const std::vector<double>& per_point) {
  const std::size_t n = space.size();
  std::vector<double> out(n * (n + 1));
  for (std::size_t c = 0; c < n; ++c) {
    const auto order = space.order(c);
    double* row = out.data() + c * (n + 1);
    row[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) row[k + 1] = row[k] + per_point[order[k]];
  }
  return out;
}

std::vector<double> sup_over_containing(const Space& space, const std::vector<double>& per_ball,
                                        std::vector<std::size_t>* witness) {
  const std::size_t n = space.size();
  if (per_ball.size() != space.canonical_balls().size()) throw Error("per-ball vector has wrong length");
  std::vector<double> out(n, -std::numeric_limits<double>::infinity());
  if (witness) witness->assign(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    const auto balls = space.canonical_balls(c);
    const auto order = space.order(c);
    const std::size_t off = space.canonical_offset(c);
    double run = -std::numeric_limits<double>::infinity();
    std::size_t run_id = off;
    // Ranks below count_j lie in ball j; walk balls from the largest down.
    for (std::size_t j = balls.size(); j-- > 0;) {
      if (per_ball[off + j] > run) {
        run = per_ball[off + j];
        run_id = off + j;
      }
      const std::size_t lo = j == 0 ? 0 : balls[j - 1].count;
      for (std::size_t p = lo; p < balls[j].count; ++p) {
        const std::size_t x = order[p];
        if (run > out[x]) {
          out[x] = run;
          if (witness) (*witness)[x] = run_id;
        }
      }
    }
  }
  return out;
}

}  // namespace nhfrac
