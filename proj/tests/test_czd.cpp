#include <cmath>

#include "doctest.h"
#include "nhfrac/czd.hpp"
#include "nhfrac/error.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/norms.hpp"
#include "nhfrac/geometry.hpp"
#include "oracle/brute_force.hpp"
#include "test_util.hpp"

using namespace nhfrac;

TEST_CASE("CZ: level above max |f| selects nothing") {
  const Space s = make_s3();
  const auto c = fit_space_constants(s);
  const FunctionVec f{1e-5, -2e-5, 1.5e-5};
  const auto cz = cz_decompose(s, c, f, 1.0, 1.0);
  CHECK(cz.omega_set.empty());
  CHECK(cz.balls.empty());
  CHECK(cz.g == f);
  for (double v : cz.h) CHECK(v == 0.0);
  CHECK(verify_cz(s, f, cz).passed);
}

TEST_CASE("CZ on S3 with f = (10, 0, 0)") {
  const Space s = make_s3();
  const auto c = fit_space_constants(s);
  const FunctionVec f{10, 0, 0};
  CZOptions opts;
  opts.gamma0 = 300.0;
  // t = 1 sits below gamma0 ||f||_1 / mu(X) = 1000, so the level is refused by default.
  CHECK_THROWS_AS(cz_decompose(s, c, f, 1.0, 1.0, opts), Error);
  opts.enforce_t_precondition = false;
  const auto cz = cz_decompose(s, c, f, 1.0, 1.0, opts);
  CHECK(cz.omega_set == std::vector<std::size_t>{0});
  REQUIRE(cz.balls.size() == 1);
  CHECK(cz.balls[0].center == 0);
  CHECK(cz.whole_space_fallback);
  for (std::size_t x = 0; x < 3; ++x) CHECK(f[x] == doctest::Approx(cz.g[x] + cz.h[x]).epsilon(1e-15));
  const auto chk = verify_cz(s, f, cz);
  CHECK(chk.passed);
  const auto o = oracle::check_cz(s, f, cz);
  CHECK(o.ok);
  // One ball covering everything: phi = mean of f on R, h has mean zero.
  CHECK(cz.phi_coeff[0] == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(cz.h[0] + cz.h[1] + cz.h[2]) <= 1e-12 * 10.0);
}

TEST_CASE("CZ postconditions on random admissible levels") {
  Rng rng(77);
  std::size_t nonempty = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    const Space s = i % 3 == 0 ? testutil::small_fixture(i) : testutil::skewed_line(8 + i, 1e6, i);
    if (s.size() < 2) continue;
    const auto c = fit_space_constants(s);
    const FunctionVec f = testutil::spiky_function(rng, s, 1 + i % 3);
    const double p = i % 2 == 0 ? 1.0 : 2.0;
    const double t = testutil::cz_min_level(s, f, p, default_gamma0(c)) * (1.0 + rng.uniform());
    const auto cz = cz_decompose(s, c, f, p, t);
    if (!cz.omega_set.empty()) ++nonempty;
    CHECK(verify_cz(s, f, cz).passed);
    const auto o = oracle::check_cz(s, f, cz);
    CHECK_MESSAGE(o.ok, (o.why.empty() ? std::string() : o.why.front()));
    CHECK(std::isfinite(cz.gamma));
  }
  // Only the skewed lines admit levels below the spikes.
  CHECK(nonempty >= 15);
}

TEST_CASE("CZ refuses bad arguments") {
  const Space s = make_s3();
  const auto c = fit_space_constants(s);
  CHECK_THROWS_AS(cz_decompose(s, c, {1, 0, 0}, 0.5, 1.0), Error);
  CHECK_THROWS_AS(cz_decompose(s, c, {1, 0, 0}, 1.0, 0.0), Error);
}

TEST_CASE("atomic blocks") {
  const Space s = make_s3();
  const Ball whole{1, 3.0};
  SUBCASE("zero block") {
    AtomicParts parts{{0, 0, 0}, Ball{0, 0.5}, 0.0, {0, 0, 0}, Ball{2, 0.5}, 0.0};
    const auto rep = validate_atomic_block(s, {0, 0, 0}, whole, parts, kInfinity);
    CHECK(rep.passed);
    CHECK(rep.block_norm == 0.0);
  }
  SUBCASE("nonzero mean fails the mean-zero condition") {
    AtomicParts parts{{1, 0, 0}, Ball{0, 0.5}, 0.1, {0, 0, 0}, Ball{2, 0.5}, 0.0};
    const auto rep = validate_atomic_block(s, {0.1, 0, 0}, whole, parts, kInfinity);
    CHECK_FALSE(rep.passed);
    bool found = false;
    for (const auto& c : rep.conditions)
      if (c.name == "mean zero") {
        found = true;
        CHECK_FALSE(c.passed);
        CHECK(c.slack == doctest::Approx(1e-10 * 0.1 - 0.1));
      }
    CHECK(found);
  }
  SUBCASE("S3 block from the two end points") {
    const auto blk = make_atomic_block(s, whole, Ball{0, 0.5}, Ball{2, 0.5});
    // Independent arithmetic: mu(2 B_j) = 1, K_{B_j, B} = 1 + 1/2 + 1/4 = 1.75.
    const double k = 1.0 + 1.0 / 2.0 + 1.0 / 4.0;
    CHECK(blk.parts.lambda1 == doctest::Approx(k).epsilon(1e-15));
    CHECK(blk.parts.lambda2 == doctest::Approx(k).epsilon(1e-15));
    CHECK(blk.parts.a1[0] == doctest::Approx(1.0 / k).epsilon(1e-15));
    CHECK(blk.parts.a2[2] == doctest::Approx(-1.0 / k).epsilon(1e-15));
    CHECK(blk.b[0] == doctest::Approx(1.0));
    CHECK(blk.b[1] == 0.0);
    CHECK(blk.b[2] == doctest::Approx(-1.0));
    const auto rep = validate_atomic_block(s, blk.b, blk.ball, blk.parts, kInfinity);
    CHECK(rep.passed);
    CHECK(rep.block_norm == doctest::Approx(2.0 * k).epsilon(1e-15));
  }
}
