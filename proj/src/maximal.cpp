#include "nhfrac/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhfrac/error.hpp"
#include "nhfrac/geometry.hpp"

namespace nhfrac {

namespace {

// Shared by M_{r,rho} and M^{(alpha)}_{p,rho}; at alpha = 0 the two agree bit for bit.
FunctionVec fractional_maximal(const Space& space, const FunctionVec& f, double p, double rho, double alpha) {
  check_bound(space, f);
  const std::size_t n = space.size();
  std::vector<double> fp(n);
  for (std::size_t i = 0; i < n; ++i) fp[i] = std::pow(std::abs(f[i]), p) * space.weight(i);
  const auto sums = neighbor_prefix_sums(space, fp);
  // Running max and min of |f| in neighbor order, to spot balls where |f| is constant.
  std::vector<double> hi(n * n), lo(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    const auto order = space.order(c);
    for (std::size_t k = 0; k < n; ++k) {
      const double v = std::abs(f[order[k]]);
      hi[c * n + k] = k == 0 ? v : std::max(hi[c * n + k - 1], v);
      lo[c * n + k] = k == 0 ? v : std::min(lo[c * n + k - 1], v);
    }
  }
  const auto balls = space.canonical_balls();
  const double expo = 1.0 - alpha * p;
  std::vector<double> per_ball(balls.size());
  for (std::size_t id = 0; id < balls.size(); ++id) {
    const Ball& b = balls[id].ball;
    const std::size_t cnt = balls[id].count;
    const double mu = space.mass_within(b.center, rho * b.radius);
    const double m = hi[b.center * n + cnt - 1];
    if (m == lo[b.center * n + cnt - 1]) {
      // |f| = m on the ball: closed form, exact when mu(ball) = mu(rho ball).
      const double frac = space.prefix_mass(b.center)[cnt] / mu;
      per_ball[id] = std::pow(mu, alpha) * m * (frac == 1.0 ? 1.0 : std::pow(frac, 1.0 / p));
      continue;
    }
    const double s = sums[b.center * (n + 1) + cnt];
    per_ball[id] = std::pow(s / std::pow(mu, expo), 1.0 / p);
  }
  return sup_over_containing(space, per_ball);
}

}  // namespace

FunctionVec maximal_Mr_rho(const Space& space, const FunctionVec& f, double r, double rho) {
  if (!(r >= 1.0)) throw Error("maximal_Mr_rho: r must be at least 1");
  if (!(rho > 0.0)) throw Error("maximal_Mr_rho: rho must be positive");
  return fractional_maximal(space, f, r, rho, 0.0);
}

FunctionVec maximal_M_alpha(const Space& space, const FunctionVec& f, double p, double rho, double alpha) {
  if (!(p >= 1.0)) throw Error("maximal_M_alpha: p must be at least 1");
  if (!(rho > 0.0)) throw Error("maximal_M_alpha: rho must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error("maximal_M_alpha: alpha must lie in [0, 1)");
  if (!(alpha * p < 1.0)) throw Error("maximal_M_alpha: need alpha * p < 1");
  return fractional_maximal(space, f, p, rho, alpha);
}

FunctionVec maximal_N(const BallIndex& index, const FunctionVec& f) {
  const Space& space = index.space();
  check_bound(space, f);
  const std::size_t n = space.size();
  std::vector<double> fa(n);
  for (std::size_t i = 0; i < n; ++i) fa[i] = std::abs(f[i]) * space.weight(i);
  const auto sums = neighbor_prefix_sums(space, fa);
  std::vector<double> per_ball(index.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t id = 0; id < index.size(); ++id) {
    if (!index.doubling(id)) continue;
    const auto& cb = index.ball(id);
    per_ball[id] = sums[cb.ball.center * (n + 1) + cb.count] / cb.mass;
  }
  auto out = sup_over_containing(space, per_ball);
  // {x} = B(x, r) for r below d_min(x) / 6 is doubling and has mean |f(x)|.
  for (std::size_t x = 0; x < n; ++x) out[x] = std::max(out[x], std::abs(f[x]));
  return out;
}

std::vector<double> oscillation_per_ball(const BallIndex& index, const FunctionVec& f, double rho) {
  const Space& space = index.space();
  check_bound(space, f);
  const std::size_t n = space.size();
  std::vector<double> fw(n);
  for (std::size_t i = 0; i < n; ++i) fw[i] = f[i] * space.weight(i);
  const auto sums = neighbor_prefix_sums(space, fw);
  std::vector<double> out(index.size());
  for (std::size_t id = 0; id < index.size(); ++id) {
    const auto& cb = index.ball(id);
    const std::size_t c = cb.ball.center;
    const std::size_t tc = index.tilde_count(id);
    const double mean = sums[c * (n + 1) + tc] / space.prefix_mass(c)[tc];
    const auto order = space.order(c);
    double s = 0.0;
    for (std::size_t k = 0; k < cb.count; ++k) s += std::abs(f[order[k]] - mean) * space.weight(order[k]);
    out[id] = s / index.dilated_mass(id, rho);
  }
  return out;
}

PairTerm pair_term_per_ball(const BallIndex& index, const FunctionVec& f, const PairOptions& opts) {
  const Space& space = index.space();
  check_bound(space, f);
  if (!(opts.alpha >= 0.0 && opts.alpha < 1.0)) throw Error("pair term: alpha must lie in [0, 1)");
  const std::size_t n = space.size();
  const std::size_t m = index.size();
  PairTerm out{std::vector<double>(m, 0.0), std::vector<std::size_t>(m, 0)};

  std::vector<double> fw(n);
  for (std::size_t i = 0; i < n; ++i) fw[i] = f[i] * space.weight(i);
  const auto fsums = neighbor_prefix_sums(space, fw);
  auto mean_of = [&](std::size_t id) {
    const auto& cb = index.ball(id);
    return fsums[cb.ball.center * (n + 1) + cb.count] / cb.mass;
  };
  std::vector<double> means(m);
  for (std::size_t id = 0; id < m; ++id) means[id] = mean_of(id);
  const double fmax = *std::max_element(f.begin(), f.end());
  const double fmin = *std::min_element(f.begin(), f.end());
  if (fmax == fmin) return out;

  // Range of the doubling means over each suffix of a center's radii; gives a
  // bound on |m_Q - m_R| for all later R of that center.
  std::vector<double> sufmax(m + 1), sufmin(m + 1);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t off = space.canonical_offset(c);
    const std::size_t end = off + space.canonical_balls(c).size();
    double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
    for (std::size_t id = end; id-- > off;) {
      if (index.doubling(id)) {
        hi = std::max(hi, means[id]);
        lo = std::min(lo, means[id]);
      }
      sufmax[id] = hi;
      sufmin[id] = lo;
    }
  }

  const bool use_k = opts.alpha == 0.0;
  std::vector<double> g(n), gsum(use_k ? n * (n + 1) : 0), ecc(n);
  std::vector<std::size_t> ptr(n);
  std::vector<double> ktilde;  // partial sums of the K~^{(alpha)} terms for the current Q, by N
  double global_best = 0.0;

  for (std::size_t q = 0; q < n; ++q) {
    const auto qballs = space.canonical_balls(q);
    const std::size_t qoff = space.canonical_offset(q);
    const auto qorder = space.order(q);
    const auto qdist = space.sorted_distances(q);
    if (use_k) {
      // g_q(x) = w_x / lambda(q, d(q, x)); g_q(q) never enters since q lies in Q.
      for (std::size_t x = 0; x < n; ++x)
        g[x] = x == q ? 0.0 : space.weight(x) / space.lambda_at(q, space.distance(q, x));
      for (std::size_t c = 0; c < n; ++c) {
        const auto order = space.order(c);
        double* row = gsum.data() + c * (n + 1);
        row[0] = 0.0;
        for (std::size_t k = 0; k < n; ++k) row[k + 1] = row[k] + g[order[k]];
      }
    }
    std::fill(ecc.begin(), ecc.end(), 0.0);
    std::fill(ptr.begin(), ptr.end(), std::size_t{0});
    std::size_t added = 0;
    double inside_g = 0.0;  // sum of g_q over Q, formed in q's neighbor order

    for (std::size_t j = 0; j < qballs.size(); ++j) {
      const std::size_t qid = qoff + j;
      const auto& Q = qballs[j];
      for (; added < Q.count; ++added) {
        const std::size_t y = qorder[added];
        if (use_k && y != q) inside_g += space.weight(y) / space.lambda_at(q, qdist[added]);
        for (std::size_t c = 0; c < n; ++c) ecc[c] = std::max(ecc[c], space.distance(c, y));
      }
      if (!index.doubling(qid)) continue;
      const double mq = means[qid];
      const double bound = std::max(fmax - mq, mq - fmin);
      if (bound <= 0.0) continue;
      if (opts.max_only && bound <= global_best) continue;
      if (!use_k) ktilde.assign(1, 0.0);
      double best = 0.0;
      std::size_t partner = qid;
      double best_floor = opts.max_only ? std::max(best, global_best) : best;

      for (std::size_t c = 0; c < n; ++c) {
        const auto cballs = space.canonical_balls(c);
        const std::size_t coff = space.canonical_offset(c);
        std::size_t& pc = ptr[c];
        while (pc < cballs.size() && !(cballs[pc].ball.radius > ecc[c])) ++pc;
        for (std::size_t t = pc; t < cballs.size(); ++t) {
          const std::size_t rid = coff + t;
          double div;
          if (use_k) {
            div = 1.0 + (gsum[c * (n + 1) + index.count2(rid)] - inside_g);
          } else {
            const int nn = n_bs(Q.ball.radius, cballs[t].ball.radius);
            while (static_cast<int>(ktilde.size()) <= nn) {
              double r = Q.ball.radius;
              for (std::size_t k = 0; k < ktilde.size(); ++k) r *= 6.0;
              const double term =
                  std::pow(space.mass_within(q, r) / space.lambda_at(q, r), 1.0 - opts.alpha);
              ktilde.push_back(ktilde.back() + term);
            }
            div = 1.0 + ktilde[static_cast<std::size_t>(nn)];
          }
          // Divisors only grow and suffix ranges only shrink along c's radii.
          const double range = std::max(sufmax[rid] - mq, mq - sufmin[rid]);
          if (!(range > 0.0) || std::min(bound, range) / div <= best_floor) break;
          if (!index.doubling(rid)) continue;
          const double v = std::abs(mq - means[rid]) / div;
          if (v > best) {
            best = v;
            partner = rid;
            best_floor = opts.max_only ? std::max(best, global_best) : best;
          }
        }
      }
      out.value[qid] = best;
      out.partner[qid] = partner;
      global_best = std::max(global_best, best);
    }
  }
  return out;
}

FunctionVec sharp_maximal(const BallIndex& index, const FunctionVec& f, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw Error("sharp_maximal: alpha must lie in [0, 1)");
  const Space& space = index.space();
  const auto a = sup_over_containing(space, oscillation_per_ball(index, f, 6.0));
  PairOptions opts;
  opts.alpha = alpha;
  const auto b = sup_over_containing(space, pair_term_per_ball(index, f, opts).value);
  FunctionVec out(space.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = a[x] + b[x];
  return out;
}

}  // namespace nhfrac
