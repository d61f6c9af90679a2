#include <cmath>

#include "doctest.h"
#include "nhfrac/ball_index.hpp"
#include "nhfrac/geometry.hpp"
#include "nhfrac/kernels.hpp"
#include "nhfrac/maximal.hpp"
#include "nhfrac/norms.hpp"
#include "nhfrac/operators.hpp"
#include "nhfrac/orlicz.hpp"
#include "oracle/brute_force.hpp"
#include "test_util.hpp"

using namespace nhfrac;

namespace {

FunctionVec axpy(double a, const FunctionVec& x, const FunctionVec& y) {
  FunctionVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
  return out;
}

}  // namespace

TEST_CASE("T is linear") {
  Rng rng(101);
  KernelSpec spec;
  spec.alpha = 0.5;
  for (std::size_t i = 0; i < 15; ++i) {
    const Space s = testutil::small_fixture(i);
    const KernelOperator op(spec, s);
    const auto f = testutil::random_function(rng, s.size());
    const auto g = testutil::random_function(rng, s.size());
    const double a = rng.uniform(-3, 3);
    const auto lhs = op.apply(axpy(a, f, g));
    const auto rhs = axpy(a, op.apply(f), op.apply(g));
    double scale = 0.0;
    for (std::size_t x = 0; x < s.size(); ++x) scale = std::max(scale, std::abs(a * op.apply(f)[x]) + std::abs(op.apply(g)[x]));
    for (std::size_t x = 0; x < s.size(); ++x) CHECK(std::abs(lhs[x] - rhs[x]) <= 1e-13 * std::max(scale, 1.0));
  }
}

TEST_CASE("maximal functions are monotone in |f| and dominate |f|") {
  Rng rng(102);
  for (std::size_t i = 0; i < 25; ++i) {
    const Space s = testutil::small_fixture(i);
    const BallIndex idx(s, fit_space_constants(s));
    const auto f = testutil::random_function(rng, s.size());
    FunctionVec big(f);
    for (auto& v : big) v = (v < 0 ? -1.0 : 1.0) * (std::abs(v) + rng.uniform());
    const auto mf = maximal_Mr_rho(s, f, 1.5, 2.0);
    const auto mb = maximal_Mr_rho(s, big, 1.5, 2.0);
    const auto nf = maximal_N(idx, f);
    for (std::size_t x = 0; x < s.size(); ++x) {
      CHECK(mf[x] <= mb[x]);
      CHECK(std::abs(f[x]) <= nf[x]);
    }
  }
}

TEST_CASE("Hoelder ordering of M^{(alpha)}_p") {
  Rng rng(103);
  for (std::size_t i = 0; i < 25; ++i) {
    const Space s = testutil::small_fixture(i);
    const auto f = testutil::random_function(rng, s.size());
    for (double a : {0.0, 0.2}) {
      const auto m1 = maximal_M_alpha(s, f, 1.0, 6.0, a);
      const auto m2 = maximal_M_alpha(s, f, 2.0, 6.0, a);
      const auto m3 = maximal_M_alpha(s, f, 3.5, 6.0, a);
      for (std::size_t x = 0; x < s.size(); ++x) {
        CHECK(m1[x] <= m2[x] * (1 + 1e-12));
        CHECK(m2[x] <= m3[x] * (1 + 1e-12));
      }
    }
    CHECK(maximal_M_alpha(s, f, 2.0, 3.0, 0.0) == maximal_Mr_rho(s, f, 2.0, 3.0));
  }
}

TEST_CASE("sharp maximal function and RBMO ignore constants") {
  Rng rng(104);
  for (std::size_t i = 0; i < 20; ++i) {
    const Space s = testutil::small_fixture(i);
    const BallIndex idx(s, fit_space_constants(s));
    const auto f = testutil::random_function(rng, s.size());
    FunctionVec g(f);
    const double c = rng.uniform(-4, 4);
    for (auto& v : g) v += c;
    const auto a = sharp_maximal(idx, f, 0.4), b = sharp_maximal(idx, g, 0.4);
    double scale = testutil::max_abs(a) + 1.0;
    for (std::size_t x = 0; x < s.size(); ++x) CHECK(std::abs(a[x] - b[x]) <= 1e-12 * scale * (1 + std::abs(c)));
    const double ra = rbmo_norm(idx, f).value, rb = rbmo_norm(idx, g).value;
    CHECK(std::abs(ra - rb) <= 1e-12 * (ra + 1.0) * (1 + std::abs(c)));
  }
}

TEST_CASE("coefficient inequalities on nested triples") {
  Rng rng(105);
  for (std::size_t i = 0; i < 20; ++i) {
    const Space s = testutil::small_fixture(i);
    for (bool conc : {false, true})
      for (const auto& t : sample_nested_triples(s, 100, rng, conc)) {
        const Ball &b = t[0], &r = t[1], &sb = t[2];
        CHECK(coeff_K(s, b, r).value <= coeff_K(s, b, sb).value);
        for (double a : {0.0, 0.5})
          CHECK(coeff_K_tilde_alpha(s, b, r, a).value <= 2.0 * coeff_K_tilde_alpha(s, b, sb, a).value);
        CHECK(coeff_K_tilde_alpha(s, b, sb, 0.0).value == doctest::Approx(coeff_K_tilde(s, b, sb).value).epsilon(1e-12));
        if (conc) {
          CHECK(coeff_K(s, b, sb).value <= coeff_K(s, b, r).value + coeff_K(s, r, sb).value);
          CHECK(coeff_K(s, r, sb).value <= coeff_K(s, b, sb).value);
        }
      }
  }
}

TEST_CASE("norm properties") {
  Rng rng(106);
  const OrliczFn z(ZygmundLogPhi{1.0});
  for (std::size_t i = 0; i < 20; ++i) {
    const Space s = testutil::small_fixture(i);
    const auto f = testutil::random_function(rng, s.size());
    const double c = rng.uniform(0.1, 10.0);
    FunctionVec cf(f);
    for (auto& v : cf) v *= -c;
    CHECK(oracle::rel_err(luxemburg_norm(s, cf, z), c * luxemburg_norm(s, f, z)) <= 1e-9);
    for (double p : {1.0, 2.0, 3.0}) {
      CHECK(weak_lp(s, f, p) <= lp_norm(s, f, p) * (1 + 1e-15));
      CHECK(oracle::rel_err(lp_norm(s, cf, p), c * lp_norm(s, f, p)) <= 1e-14);
    }
    const auto g = testutil::random_function(rng, s.size());
    // Triangle inequality.
    CHECK(lp_norm(s, axpy(1.0, f, g), 2.0) <= (lp_norm(s, f, 2.0) + lp_norm(s, g, 2.0)) * (1 + 1e-15));
  }
}
