#include <cmath>

#include "doctest.h"
#include "nhfrac/error.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/geometry.hpp"
#include "oracle/brute_force.hpp"
#include "test_util.hpp"

using namespace nhfrac;

TEST_CASE("smallest doubling ball") {
  const Space s = make_s3();
  CHECK(smallest_doubling_ball(s, Ball{1, 0.5}, 6.0, 2.0) == Ball{1, 3.0});
  CHECK(smallest_doubling_ball(s, Ball{0, 5.0}, 6.0, 2.0) == Ball{0, 5.0});
  const Space one = testutil::single_point();
  CHECK(smallest_doubling_ball(one, Ball{0, 0.3}, 6.0, 2.0) == Ball{0, 0.3});
  CHECK_THROWS_AS(smallest_doubling_ball(s, Ball{1, 0.5}, 1.0, 2.0), Error);
}

TEST_CASE("beta_eta arithmetic") {
  CHECK(beta_eta(6, 1, 1) == 276.0);
  CHECK(beta_eta(6, 0, 0) == 3.0);
  CHECK(beta_eta(2, 1, 2) == 994.0);
}

TEST_CASE("n_bs") {
  CHECK(n_bs(0.5, 1.5) == 1);
  CHECK(n_bs(0.5, 18.0) == 2);
  CHECK(n_bs(1.0, 1.0) == 0);
  CHECK(n_bs(1.0, 6.0) == 1);
}

TEST_CASE("coeff_K on S3") {
  const Space s = make_s3();
  CHECK(coeff_K(s, Ball{1, 0.5}, Ball{1, 1.5}).value == 2.0);
  CHECK(oracle::coeff_K(s, 1, 0.5, 1, 1.5) == 2.0);
  // B = S with the whole space already realized: nothing outside B.
  CHECK(coeff_K(s, Ball{1, 3.0}, Ball{1, 3.0}).value == 1.0);
  CHECK(coeff_K(testutil::single_point(), Ball{0, 1.0}, Ball{0, 1.0}).value == 1.0);
  CHECK_THROWS_AS(coeff_K(s, Ball{0, 1.0}, Ball{2, 1.0}), Error);
}

TEST_CASE("coeff_K_tilde on S3") {
  const Space s = make_s3();
  const auto a = coeff_K_tilde(s, Ball{1, 0.5}, Ball{1, 1.5});
  CHECK(a.n_bs == 1);
  CHECK(a.value == 1.5);
  const auto b = coeff_K_tilde(s, Ball{1, 0.5}, Ball{1, 18.0});
  CHECK(b.n_bs == 2);
  CHECK(b.value == doctest::Approx(1.0 + 0.5 + 3.0 / 36.0).epsilon(1e-15));
  CHECK(b.value == doctest::Approx(1.58333).epsilon(1e-5));
  CHECK(coeff_K_tilde(s, Ball{1, 0.7}, Ball{1, 0.7}).value == 1.0);
}

TEST_CASE("coeff_K_tilde_alpha on S3") {
  const Space s = make_s3();
  CHECK(coeff_K_tilde_alpha(s, Ball{1, 0.5}, Ball{1, 1.5}, 0.5).value ==
        doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-15));
  CHECK(coeff_K_tilde_alpha(s, Ball{1, 0.5}, Ball{1, 1.5}, 0.5).value == doctest::Approx(1.70711).epsilon(1e-5));
  CHECK(coeff_K_tilde_alpha(s, Ball{1, 0.5}, Ball{1, 18.0}, 0.0).value ==
        coeff_K_tilde(s, Ball{1, 0.5}, Ball{1, 18.0}).value);
  for (double a : {0.0, 0.3, 0.9}) CHECK(coeff_K_tilde_alpha(s, Ball{2, 0.4}, Ball{2, 0.4}, a).value == 1.0);
  CHECK_THROWS_AS(coeff_K_tilde_alpha(s, Ball{1, 0.5}, Ball{1, 1.5}, 1.0), Error);
}

TEST_CASE("nesting predicates") {
  const Space s = make_s3();
  CHECK(geometrically_nested(s, Ball{1, 0.5}, Ball{1, 1.5}));
  CHECK_FALSE(geometrically_nested(s, Ball{0, 1.0}, Ball{1, 1.5}));
  // Realized {0} lies in realized {0, 1, 2} even though the radii do not nest.
  CHECK(set_contained(s, Ball{0, 1.0}, Ball{1, 1.5}));
  CHECK_FALSE(set_contained(s, Ball{0, 1.5}, Ball{2, 1.5}));
}

TEST_CASE("vitali selection") {
  const Space s = make_s3();
  CHECK(vitali_select(s, {}).empty());
  const auto two = vitali_select(s, {Ball{0, 0.5}, Ball{2, 0.5}});
  CHECK(two.size() == 2);
  const auto same = vitali_select(s, {Ball{1, 0.5}, Ball{1, 0.5}});
  CHECK(same.size() == 1);
  // Ball(0, 1.5) = {0, 1} is kept first (tie broken by center id); Ball(1, 1.5)
  // and Ball(2, 1.5) = {1, 2} both meet it at point 1, so only it survives.
  const auto sel = vitali_select(s, {Ball{0, 1.5}, Ball{1, 1.5}, Ball{2, 1.5}});
  REQUIRE(sel.size() == 1);
  CHECK(sel[0] == Ball{0, 1.5});
  // Larger radii go first.
  const auto big = vitali_select(s, {Ball{0, 0.5}, Ball{2, 1.5}});
  REQUIRE(big.size() == 2);
  CHECK(big[0] == Ball{2, 1.5});
  CHECK_THROWS_AS(vitali_select(s, {Ball{0, 1.0}}, 0.5), Error);
}

TEST_CASE("vitali covering property on random spaces") {
  Rng rng(5);
  for (std::size_t i = 0; i < 20; ++i) {
    const Space s = testutil::small_fixture(i);
    std::vector<Ball> in;
    for (int k = 0; k < 6; ++k) in.push_back(s.canonical_balls()[rng.index(s.canonical_balls().size())].ball);
    const auto kept = vitali_select(s, in);
    // Kept balls are pairwise disjoint and every input meets a kept ball of radius at least its own.
    for (std::size_t a = 0; a < kept.size(); ++a)
      for (std::size_t b = a + 1; b < kept.size(); ++b)
        for (std::size_t y = 0; y < s.size(); ++y) CHECK_FALSE((s.contains(kept[a], y) && s.contains(kept[b], y)));
    for (const Ball& b : in) {
      bool met = false;
      for (const Ball& k : kept)
        for (std::size_t y = 0; y < s.size(); ++y) met = met || (k.radius >= b.radius && s.contains(k, y) && s.contains(b, y));
      CHECK(met);
    }
  }
}

TEST_CASE("coefficients match the brute-force oracle on nested triples") {
  Rng rng(17);
  for (std::size_t i = 0; i < 20; ++i) {
    const Space s = testutil::small_fixture(i);
    for (const auto& t : sample_nested_triples(s, 50, rng, i % 2 == 0)) {
      const Ball &b = t[0], &r = t[2];
      CHECK(oracle::rel_err(coeff_K(s, b, r).value, oracle::coeff_K(s, b.center, b.radius, r.center, r.radius)) <=
            1e-12);
      CHECK(oracle::rel_err(coeff_K_tilde(s, b, r).value,
                            oracle::coeff_K_tilde_alpha(s, b.center, b.radius, r.radius, 0.0)) <= 1e-12);
      CHECK(oracle::rel_err(coeff_K_tilde_alpha(s, b, r, 0.4).value,
                            oracle::coeff_K_tilde_alpha(s, b.center, b.radius, r.radius, 0.4)) <= 1e-12);
    }
  }
}

TEST_CASE("sampled triples are geometrically nested") {
  Rng rng(3);
  const Space s = make_s3();
  for (bool conc : {true, false})
    for (const auto& t : sample_nested_triples(s, 200, rng, conc)) {
      CHECK(geometrically_nested(s, t[0], t[1]));
      CHECK(geometrically_nested(s, t[1], t[2]));
      if (conc) CHECK((t[0].center == t[1].center && t[1].center == t[2].center));
    }
}
