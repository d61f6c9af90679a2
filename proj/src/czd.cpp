#include "nhfrac/czd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhfrac/error.hpp"
#include "nhfrac/geometry.hpp"
#include "nhfrac/norms.hpp"

namespace nhfrac {

namespace {

constexpr double kEtaR = 3.0 * 36.0;

double abs_pow(double v, double p) { return p == 1.0 ? std::abs(v) : std::pow(std::abs(v), p); }

}  // namespace

double default_gamma0(const SpaceConstants& constants) {
  const double a = std::pow(constants.c_lambda, 3.0 * std::log2(6.0));
  const double b = std::pow(6.0, 3.0 * constants.n);
  return 1.01 * std::max(a, b);
}

double cz_average(const Space& space, const FunctionVec& f, double p, std::size_t x, double s) {
  double num = 0.0;
  for (std::size_t y : space.members(Ball{x, s})) num += abs_pow(f[y], p) * space.weight(y);
  return num / space.mass_within(x, 36.0 * s);
}

FunctionVec cz_phi(const Space& space, const CZDecomposition& cz, std::size_t j) {
  FunctionVec out(space.size(), 0.0);
  for (std::size_t y : space.members(cz.doubling[j])) out[y] = cz.phi_coeff[j];
  return out;
}

CZDecomposition cz_decompose(const Space& space, const SpaceConstants& constants, const FunctionVec& f, double p,
                             double t, const CZOptions& opts) {
  check_bound(space, f);
  if (!(p >= 1.0)) throw Error("cz_decompose: p must be at least 1");
  if (!(t > 0.0)) throw Error("cz_decompose: t must be positive");
  const std::size_t n = space.size();
  CZDecomposition cz;
  cz.t = t;
  cz.p = p;
  cz.gamma0 = opts.gamma0 > 0.0 ? opts.gamma0 : default_gamma0(constants);
  cz.threshold = std::pow(t, p) / cz.gamma0;

  double total = 0.0;
  for (std::size_t y = 0; y < n; ++y) total += abs_pow(f[y], p) * space.weight(y);
  const double avg_all = total / space.total_mass();
  if (opts.enforce_t_precondition && !(avg_all < cz.threshold)) {
    std::ostringstream os;
    os << "cz_decompose: level t = " << t << " violates t > gamma0^{1/p} ||f||_p / mu(X)^{1/p} (need t > "
       << std::pow(cz.gamma0 * avg_all, 1.0 / p) << ")";
    throw Error(os.str());
  }

  for (std::size_t x = 0; x < n; ++x)
    if (std::abs(f[x]) > t) cz.omega_set.push_back(x);

  // Radius choice: A(s) is left-continuous and piecewise constant with
  // breakpoints at the distances d and d / 36, so the largest s with
  // A(s) > t^p / gamma0 is one of the breakpoints (or infinite).
  std::vector<Ball> candidates;
  for (std::size_t x : cz.omega_set) {
    if (avg_all > cz.threshold) {
      cz.whole_space_fallback = true;
      candidates.push_back(space.canonical_balls(x).back().ball);
      continue;
    }
    std::vector<double> bps;
    for (double d : space.sorted_distances(x)) {
      if (d > 0.0) {
        bps.push_back(d);
        bps.push_back(d / 36.0);
      }
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    double chosen = 0.0;
    for (auto it = bps.rbegin(); it != bps.rend(); ++it) {
      if (cz_average(space, f, p, x, *it) > cz.threshold) {
        chosen = *it;
        break;
      }
    }
    if (chosen == 0.0) {
      // Only possible for a single point, where the precondition already failed.
      cz.whole_space_fallback = true;
      candidates.push_back(space.canonical_balls(x).back().ball);
      continue;
    }
    candidates.push_back(Ball{x, chosen});
  }

  cz.balls = vitali_select(space, candidates);

  std::vector<std::size_t> cover(n, 0);
  for (const Ball& b : cz.balls)
    for (std::size_t y : space.members(b.dilate(6.0))) ++cover[y];
  for (std::size_t x : cz.omega_set)
    if (cover[x] == 0) throw Error("cz_decompose: point " + std::to_string(x) + " of Omega is not covered");

  double beta = std::pow(constants.c_lambda, std::log2(kEtaR) + 1.0);
  if (!(beta > 1.0)) beta = std::nextafter(1.0, 2.0);

  cz.g.assign(n, 0.0);
  cz.h.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    if (cover[x] == 0) cz.g[x] = f[x];

  std::vector<double> phi_abs(n, 0.0);
  for (const Ball& b : cz.balls) {
    PartitionPiece piece;
    double integral = 0.0, abs_integral = 0.0, abs_p_integral = 0.0;
    for (std::size_t y : space.members(b.dilate(6.0))) {
      const double w = 1.0 / static_cast<double>(cover[y]);
      piece.points.push_back(y);
      piece.values.push_back(w);
      integral += f[y] * w * space.weight(y);
      abs_integral += std::abs(f[y] * w) * space.weight(y);
      abs_p_integral += abs_pow(f[y] * w, p) * space.weight(y);
      cz.h[y] += w * f[y];
    }
    const Ball r = smallest_doubling_ball(space, b, kEtaR, beta);
    const double mu_r = mu_ball(space, r);
    const double c = integral / mu_r;
    for (std::size_t y : space.members(r)) {
      cz.g[y] += c;
      cz.h[y] -= c;
      phi_abs[y] += std::abs(c);
    }
    if (abs_integral > 0.0) cz.c_phi_inf = std::max(cz.c_phi_inf, std::abs(c) * mu_r / abs_integral);
    if (abs_p_integral > 0.0)
      cz.c_phi_lp = std::max(cz.c_phi_lp, std::abs(c) * mu_r * std::pow(t, p - 1.0) / abs_p_integral);
    cz.omega.push_back(std::move(piece));
    cz.doubling.push_back(r);
    cz.phi_coeff.push_back(c);
  }
  for (double v : phi_abs) cz.gamma = std::max(cz.gamma, v / t);
  return cz;
}

CZCheck verify_cz(const Space& space, const FunctionVec& f, const CZDecomposition& cz) {
  CZCheck out;
  auto fail = [&](const std::string& msg) {
    out.passed = false;
    out.failures.push_back(msg);
  };
  const std::size_t n = space.size();

  std::vector<double> phi_abs(n, 0.0);
  for (std::size_t j = 0; j < cz.balls.size(); ++j)
    for (std::size_t y : space.members(cz.doubling[j])) phi_abs[y] += std::abs(cz.phi_coeff[j]);

  double mass_scale = 0.0, hw = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double scale = std::abs(f[x]) + std::abs(cz.g[x]) + phi_abs[x];
    if (std::abs(f[x] - (cz.g[x] + cz.h[x])) > 1e-12 * scale) fail("f != g + h at point " + std::to_string(x));
    mass_scale += scale * space.weight(x);
    hw += cz.h[x] * space.weight(x);
  }
  if (std::abs(hw) > 1e-12 * mass_scale) fail("sum h w != 0");

  std::vector<int> owner(n, -1);
  for (std::size_t j = 0; j < cz.balls.size(); ++j) {
    for (std::size_t y : space.members(cz.balls[j])) {
      if (owner[y] >= 0) fail("balls " + std::to_string(owner[y]) + " and " + std::to_string(j) + " intersect");
      owner[y] = static_cast<int>(j);
    }
    const Ball& b = cz.balls[j];
    if (!(cz_average(space, f, cz.p, b.center, b.radius) > cz.threshold))
      fail("level condition fails for ball " + std::to_string(j));
  }

  std::vector<double> omega_sum(n, 0.0);
  for (const auto& piece : cz.omega)
    for (std::size_t k = 0; k < piece.points.size(); ++k) omega_sum[piece.points[k]] += piece.values[k];
  std::vector<char> covered(n, 0);
  for (const Ball& b : cz.balls)
    for (std::size_t y : space.members(b.dilate(6.0))) covered[y] = 1;
  for (std::size_t x = 0; x < n; ++x) {
    if (covered[x] ? std::abs(omega_sum[x] - 1.0) > 1e-14 : omega_sum[x] != 0.0)
      fail("partition of unity fails at point " + std::to_string(x));
  }
  for (std::size_t x : cz.omega_set)
    if (!covered[x]) fail("Omega point " + std::to_string(x) + " not covered");

  for (std::size_t j = 0; j < cz.balls.size(); ++j) {
    double integral = 0.0, abs_integral = 0.0;
    const auto& piece = cz.omega[j];
    for (std::size_t k = 0; k < piece.points.size(); ++k) {
      const std::size_t y = piece.points[k];
      integral += f[y] * piece.values[k] * space.weight(y);
      abs_integral += std::abs(f[y] * piece.values[k]) * space.weight(y);
    }
    double phi_integral = 0.0;
    for (std::size_t y : space.members(cz.doubling[j])) phi_integral += cz.phi_coeff[j] * space.weight(y);
    if (std::abs(phi_integral - integral) > 1e-12 * std::max(abs_integral, 1e-300))
      fail("mean of phi_j differs from mean of f omega_j for ball " + std::to_string(j));
    const double lhs = std::abs(cz.phi_coeff[j]) * mu_ball(space, cz.doubling[j]);
    if (lhs > abs_integral * (1.0 + 1e-12)) fail("|phi_j| mu(R_j) exceeds int |f omega_j| for ball " + std::to_string(j));
  }
  return out;
}

AtomicBlockReport validate_atomic_block(const Space& space, const FunctionVec& b, const Ball& ball,
                                        const AtomicParts& parts, double p, double rho) {
  check_bound(space, b);
  if (!(rho > 1.0)) throw Error("validate_atomic_block: rho must exceed 1");
  AtomicBlockReport rep;
  auto add = [&](std::string name, double bound, double measured) {
    BlockCondition c{std::move(name), measured <= bound, bound - measured};
    rep.passed = rep.passed && c.passed;
    rep.conditions.push_back(std::move(c));
  };
  const std::size_t n = space.size();

  double outside = 0.0;
  for (std::size_t x = 0; x < n; ++x)
    if (!space.contains(ball, x)) outside = std::max(outside, std::abs(b[x]));
  add("support in B", 0.0, outside);

  double mean = 0.0, l1 = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    mean += b[x] * space.weight(x);
    l1 += std::abs(b[x]) * space.weight(x);
  }
  add("mean zero", 1e-10 * l1, std::abs(mean));

  double mismatch = 0.0, scale = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double rhs = parts.lambda1 * parts.a1[x] + parts.lambda2 * parts.a2[x];
    mismatch = std::max(mismatch, std::abs(b[x] - rhs));
    scale = std::max(scale, std::abs(b[x]) + std::abs(parts.lambda1 * parts.a1[x]) + std::abs(parts.lambda2 * parts.a2[x]));
  }
  add("b = lambda1 a1 + lambda2 a2", 1e-12 * scale, mismatch);

  const std::pair<const FunctionVec*, const Ball*> pieces[2] = {{&parts.a1, &parts.b1}, {&parts.a2, &parts.b2}};
  for (int j = 0; j < 2; ++j) {
    const FunctionVec& a = *pieces[j].first;
    const Ball& bj = *pieces[j].second;
    const std::string tag = "a" + std::to_string(j + 1);
    check_bound(space, a);
    double off = 0.0;
    for (std::size_t x = 0; x < n; ++x)
      if (!space.contains(bj, x)) off = std::max(off, std::abs(a[x]));
    add(tag + " support in B" + std::to_string(j + 1), 0.0, off);
    add("B" + std::to_string(j + 1) + " within B", 0.0, set_contained(space, bj, ball) ? 0.0 : 1.0);
    if (!geometrically_nested(space, bj, ball)) {
      add(tag + " size (B" + std::to_string(j + 1) + " not nested in B)", 0.0, 1.0);
      continue;
    }
    const double k = coeff_K(space, bj, ball).value;
    const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
    const double bound = std::pow(mu_ball(space, bj.dilate(rho)), inv_p - 1.0) / k;
    add(tag + " size", bound * (1.0 + 1e-12), lp_norm(space, a, std::isinf(p) ? kInfinity : p));
  }
  rep.block_norm = std::abs(parts.lambda1) + std::abs(parts.lambda2);
  return rep;
}

AtomicBlock make_atomic_block(const Space& space, const Ball& ball, const Ball& b1, const Ball& b2, double rho) {
  AtomicBlock out;
  out.ball = ball;
  const std::size_t n = space.size();
  out.parts.b1 = b1;
  out.parts.b2 = b2;
  out.parts.a1.assign(n, 0.0);
  out.parts.a2.assign(n, 0.0);
  const double k1 = coeff_K(space, b1, ball).value;
  const double k2 = coeff_K(space, b2, ball).value;
  const double m1 = mu_ball(space, b1.dilate(rho));
  const double m2 = mu_ball(space, b2.dilate(rho));
  for (std::size_t y : space.members(b1)) out.parts.a1[y] = 1.0 / (m1 * k1);
  for (std::size_t y : space.members(b2)) out.parts.a2[y] = -1.0 / (m2 * k2);
  out.parts.lambda1 = m1 * k1 / mu_ball(space, b1);
  out.parts.lambda2 = m2 * k2 / mu_ball(space, b2);
  out.b.assign(n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    out.b[x] = out.parts.lambda1 * out.parts.a1[x] + out.parts.lambda2 * out.parts.a2[x];
  return out;
}

}  // namespace nhfrac
