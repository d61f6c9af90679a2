#include <cmath>

#include "doctest.h"
#include "nhfrac/error.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/kernels.hpp"
#include "oracle/brute_force.hpp"
#include "test_util.hpp"

using namespace nhfrac;

TEST_CASE("fractional integral kernel on S3") {
  const Space s = make_s3();
  KernelSpec k;
  CHECK(eval_kernel(k, s, 1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eval_kernel(k, s, 1, 0) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(eval_kernel(k, s, 1, 1) == 0.0);
  k.diagonal = DiagonalConvention::kNone;
  CHECK_THROWS_AS(eval_kernel(k, s, 1, 1), Error);
  // Atom radius: half the nearest-neighbor distance, lambda(1, 0.5) = 1.
  k.diagonal = DiagonalConvention::kAtomRadius;
  CHECK(eval_kernel(k, s, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Bergman kernel at the origin is 1") {
  const Space s = make_complex_ball(ComplexBallSpec{4, 2.0, 9});
  for (double alpha : {0.1, 0.5}) {
    KernelSpec k{alpha, BergmanKernel{2.0}, DiagonalConvention::kExclude};
    CHECK(eval_kernel(k, s, 0, 0) == 1.0);
    // Against the origin the inner product vanishes.
    CHECK(eval_kernel(k, s, 0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("size condition") {
  const Space s = make_s3();
  CHECK(check_size_condition(KernelSpec{}, s).c_size == doctest::Approx(1.0).epsilon(1e-15));
  KernelSpec zero{0.5, CustomMatrixKernel{std::vector<double>(9, 0.0)}, DiagonalConvention::kExclude};
  CHECK(check_size_condition(zero, s).c_size == 0.0);
  const Space cb = make_complex_ball(ComplexBallSpec{32, 2.0, 3});
  KernelSpec berg{0.5, BergmanKernel{2.0}, DiagonalConvention::kExclude};
  const auto fit = check_size_condition(berg, cb);
  CHECK(std::isfinite(fit.c_size));
  CHECK(fit.c_size > 0.0);
}

TEST_CASE("custom matrix validation") {
  const Space s = make_s3();
  KernelSpec bad{0.5, CustomMatrixKernel{std::vector<double>(4, 0.0)}, DiagonalConvention::kExclude};
  CHECK_THROWS_AS(validate_kernel(bad, s), Error);
  std::vector<double> diag(9, 0.0);
  diag[4] = 1.0;
  KernelSpec nonzero_diag{0.5, CustomMatrixKernel{diag}, DiagonalConvention::kExclude};
  CHECK_THROWS_AS(validate_kernel(nonzero_diag, s), Error);
}

TEST_CASE("smoothness condition") {
  const Space s = make_s3();
  std::vector<double> c(9, 2.5);
  for (int i = 0; i < 3; ++i) c[i * 3 + i] = 0.0;
  KernelSpec flat{0.5, CustomMatrixKernel{c}, DiagonalConvention::kExclude};
  const auto f0 = check_smoothness_condition(flat, s, {0.25, 0.5, 0.75, 1.0});
  CHECK_FALSE(f0.empty);
  for (const auto& row : f0.table) CHECK(row.c_smooth == 0.0);

  const auto f1 = check_smoothness_condition(KernelSpec{}, s, {1.0});
  CHECK_FALSE(f1.empty);
  CHECK(std::isfinite(f1.best.c_smooth));
  // Exhaustive on S3: admissible triples need d(x, y) >= 2 d(x, x~), i.e. x, x~ adjacent and y on the far side.
  const auto& w = f1.best;
  CHECK(s.distance(w.witness_x, w.witness_y) >= 2.0 * s.distance(w.witness_x, w.witness_xt));

  CHECK(check_smoothness_condition(KernelSpec{}, testutil::single_point(), {1.0}).empty);
  CHECK(check_smoothness_condition(KernelSpec{}, testutil::two_point(), {1.0}).empty);
  CHECK_THROWS_AS(check_smoothness_condition(KernelSpec{}, s, {1.5}), Error);
}

TEST_CASE("kernel matrix matches the direct formula") {
  for (std::size_t i = 0; i < 15; ++i) {
    const Space s = testutil::small_fixture(i);
    KernelSpec k{0.3, FracIntegralKernel{}, DiagonalConvention::kExclude};
    const auto m = kernel_matrix(k, s);
    for (std::size_t x = 0; x < s.size(); ++x)
      for (std::size_t y = 0; y < s.size(); ++y)
        CHECK(oracle::rel_err(m[x * s.size() + y], oracle::kernel(s, x, y, 0.3)) <= 1e-15);
  }
}

TEST_CASE("kernel JSON round trip") {
  KernelSpec k{0.25, BergmanKernel{3.0}, DiagonalConvention::kAtomRadius};
  const KernelSpec r = kernel_from_json(kernel_to_json(k));
  CHECK(r.alpha == 0.25);
  CHECK(std::get<BergmanKernel>(r.kind).m == 3.0);
  CHECK(r.diagonal == DiagonalConvention::kAtomRadius);
  CHECK_THROWS_AS(diagonal_from_string("bogus"), Error);
}
