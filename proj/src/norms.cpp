#include "nhfrac/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nhfrac/error.hpp"
#include "nhfrac/maximal.hpp"

namespace nhfrac {

namespace {

constexpr int kMaxBisection = 200;
constexpr double kRelTol = 1e-14;

// Smallest t in a bracket [lo, hi] with pred(t) true, pred monotone (false then true).
template <class Pred>
double log_bisect(double lo, double hi, Pred pred) {
  for (int it = 0; it < kMaxBisection && hi - lo > kRelTol * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> tilde_means(const BallIndex& index, const FunctionVec& f) {
  const Space& space = index.space();
  const std::size_t n = space.size();
  std::vector<double> fw(n);
  for (std::size_t i = 0; i < n; ++i) fw[i] = f[i] * space.weight(i);
  const auto sums = neighbor_prefix_sums(space, fw);
  std::vector<double> out(index.size());
  for (std::size_t id = 0; id < index.size(); ++id) {
    const std::size_t c = index.ball(id).ball.center;
    const std::size_t tc = index.tilde_count(id);
    out[id] = sums[c * (n + 1) + tc] / space.prefix_mass(c)[tc];
  }
  return out;
}

}  // namespace

double lp_norm(const Space& space, const FunctionVec& f, double p) {
  check_bound(space, f);
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw Error("lp_norm: p must be at least 1");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p) * space.weight(i);
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double weak_lp(const Space& space, const FunctionVec& f, double p) {
  check_bound(space, f);
  if (!(p >= 1.0)) throw Error("weak_lp: p must be at least 1");
  std::vector<std::size_t> idx(f.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(f[a]) > std::abs(f[b]); });
  double best = 0.0, mass = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    mass += space.weight(idx[k]);
    const double t = std::abs(f[idx[k]]);
    // Evaluate once all points sharing this value are counted.
    if (k + 1 < idx.size() && std::abs(f[idx[k + 1]]) == t) continue;
    best = std::max(best, t * (p == 1.0 ? mass : std::pow(mass, 1.0 / p)));
  }
  return best;
}

double luxemburg_norm(const Space& space, const FunctionVec& f, const OrliczFn& phi) {
  check_bound(space, f);
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0) return 0.0;
  auto modular = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[i] != 0.0) s += phi(std::abs(f[i]) / t) * space.weight(i);
    return s;
  };
  auto ok = [&](double t) { return modular(t) <= 1.0; };
  double hi = fmax;
  while (!ok(hi)) hi *= 2.0;
  double lo = hi;
  while (ok(lo)) lo /= 2.0;
  return log_bisect(lo, hi, ok);
}

double mean_on_ball(const Space& space, const FunctionVec& f, const Ball& ball) {
  check_bound(space, f);
  double s = 0.0, m = 0.0;
  for (std::size_t y : space.members(ball)) {
    s += f[y] * space.weight(y);
    m += space.weight(y);
  }
  return s / m;
}

RbmoEstimate rbmo_norm(const BallIndex& index, const FunctionVec& f, double rho) {
  if (!(rho > 1.0)) throw Error("rbmo_norm: rho must exceed 1");
  RbmoEstimate est;
  est.rho = rho;
  const auto osc = oscillation_per_ball(index, f, rho);
  const auto ait = std::max_element(osc.begin(), osc.end());
  est.oscillation = *ait;
  est.witness_ball = index.ball(static_cast<std::size_t>(ait - osc.begin())).ball;
  PairOptions opts;
  opts.max_only = true;
  const auto pairs = pair_term_per_ball(index, f, opts);
  const auto bit = std::max_element(pairs.value.begin(), pairs.value.end());
  est.regularity = *bit;
  const std::size_t qid = static_cast<std::size_t>(bit - pairs.value.begin());
  est.witness_q = index.ball(qid).ball;
  est.witness_r = index.ball(pairs.partner[qid]).ball;
  est.value = std::max(est.oscillation, est.regularity);
  return est;
}

double oscillation_r(const BallIndex& index, const FunctionVec& f, double r, double rho) {
  if (!(r >= 1.0)) throw Error("oscillation_r: r must be at least 1");
  const Space& space = index.space();
  check_bound(space, f);
  const auto means = tilde_means(index, f);
  double best = 0.0;
  for (std::size_t id = 0; id < index.size(); ++id) {
    const auto& cb = index.ball(id);
    const auto order = space.order(cb.ball.center);
    double s = 0.0;
    for (std::size_t k = 0; k < cb.count; ++k)
      s += std::pow(std::abs(f[order[k]] - means[id]), r) * space.weight(order[k]);
    best = std::max(best, std::pow(s / index.dilated_mass(id, rho), 1.0 / r));
  }
  return best;
}

OscEstimate osc_exp_norm(const BallIndex& index, const FunctionVec& f, double r) {
  if (!(r >= 1.0)) throw Error("osc_exp_norm: r must be at least 1");
  const Space& space = index.space();
  check_bound(space, f);
  const auto means = tilde_means(index, f);
  OscEstimate est;
  std::vector<double> g;
  for (std::size_t id = 0; id < index.size(); ++id) {
    const auto& cb = index.ball(id);
    const auto order = space.order(cb.ball.center);
    const double mu2 = index.dilated_mass(id, 2.0);
    g.resize(cb.count);
    double gmax = 0.0, wmax = 0.0;
    for (std::size_t k = 0; k < cb.count; ++k) {
      g[k] = std::abs(f[order[k]] - means[id]);
      if (g[k] > gmax) {
        gmax = g[k];
        wmax = space.weight(order[k]);
      }
    }
    if (gmax == 0.0) continue;
    auto ok = [&](double s) {
      double acc = 0.0;
      for (std::size_t k = 0; k < cb.count; ++k) acc += std::exp(std::pow(g[k] / s, r)) * space.weight(order[k]);
      return acc / mu2 <= 2.0;
    };
    // This ball cannot raise the maximum.
    if (est.exp_term > 0.0 && ok(est.exp_term)) continue;
    // At lo the heaviest-deviation point alone reaches the level 2.
    const double lo = gmax / std::pow(std::log(2.0 * mu2 / wmax), 1.0 / r);
    const double hi = gmax / std::pow(std::log(2.0), 1.0 / r);
    const double s = log_bisect(lo, hi, ok);
    if (s > est.exp_term) {
      est.exp_term = s;
      est.witness_ball = cb.ball;
    }
  }
  PairOptions opts;
  opts.max_only = true;
  const auto pairs = pair_term_per_ball(index, f, opts);
  est.regularity = *std::max_element(pairs.value.begin(), pairs.value.end());
  est.value = std::max(est.exp_term, est.regularity);
  return est;
}

}  // namespace nhfrac
