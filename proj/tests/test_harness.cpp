#include <cmath>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "nhfrac/ball_index.hpp"
#include "nhfrac/config.hpp"
#include "nhfrac/error.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/maximal.hpp"
#include "nhfrac/norms.hpp"
#include "nhfrac/operators.hpp"
#include "nhfrac/report.hpp"
#include "nhfrac/suites.hpp"
#include "oracle/brute_force.hpp"
#include "test_util.hpp"

using namespace nhfrac;

TEST_CASE("exponent pairs off the scaling line are refused") {
  CHECK_NOTHROW(check_exponent_pair({1.5, 6.0}, 0.5));
  try {
    check_exponent_pair({1.5, 5.0}, 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("1/q - (1/p - alpha)") != std::string::npos);
    CHECK(msg.find("0.033333") != std::string::npos);
  }
  const nlohmann::json bad{{"kernel", {{"type", "frac_integral"}, {"alpha", 0.5}}},
                           {"exponents", {{{"p", 2}, {"q", 2}}}}};
  CHECK_THROWS_AS(config_from_json(bad), Error);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"suites", {"nope"}}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"ladder", {{"fixture", {{"generator", "s3"}}}, {"n", {0}}}}}),
                  Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"fixtures", {{{"generator", "s3"}}}}}), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"endpoint", {{"k", 2}, {"r", {1}}}}}), Error);
  const auto cfg = config_from_json(nlohmann::json{{"baselines", "b.json"}}, "/tmp/x");
  CHECK(cfg.baselines_path == (std::filesystem::path("/tmp/x") / "b.json").string());
  const auto round = config_from_json(config_to_json(config_from_json(nlohmann::json::object())));
  CHECK(round.suites.empty());
  CHECK(round.lambda_grid == ExperimentConfig{}.lambda_grid);
}

TEST_CASE("empty suite list runs and reports nothing") {
  const auto cfg = config_from_json(nlohmann::json{{"suites", nlohmann::json::array()}});
  RunOptions opts;
  opts.write = false;
  const auto res = run(cfg, opts);
  CHECK(res.ok());
  CHECK(res.reports.empty());
  CHECK_THROWS_AS(run_suite("nope", cfg, {}), Error);
}

TEST_CASE("operator-norm estimator") {
  const Space s = make_space(nlohmann::json{{"generator", "random_metric"}, {"n", 12}, {"seed", 3}});
  FamilySpec fs;
  fs.tag = "bumps";
  fs.count = 6;
  fs.normalize_p = 2.0;
  const auto fam = make_function_family(s, fs);
  const Transform identity = [](const FunctionVec& f) { return f; };
  const Transform zero = [](const FunctionVec& f) { return FunctionVec(f.size(), 0.0); };
  const auto id = estimate_operator_norm(s, identity, 2.0, 2.0, fam);
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(id.evaluated == fam.size());
  CHECK(estimate_operator_norm(s, zero, 2.0, 2.0, fam).value == 0.0);
  CHECK(weak_type_statistic(s, zero, 2.0, 2.0, fam).value == 0.0);
  const Transform twice = [](const FunctionVec& f) {
    FunctionVec g(f);
    for (auto& v : g) v = 2.0 * v * v;
    return g;
  };
  CHECK(weak_type_statistic(s, twice, 2.0, 1.5, fam).value <=
        estimate_operator_norm(s, twice, 2.0, 1.5, fam).value * (1 + 1e-15));
  CHECK_THROWS_AS(estimate_operator_norm(s, identity, 2.0, 2.0, {}), Error);
  CHECK_THROWS_AS(weak_type_statistic(s, identity, 2.0, 2.0, {}), Error);
  // Zero inputs are skipped, not evaluated.
  std::vector<NamedFunction> with_zero{fam.front(), NamedFunction{"zero", FunctionVec(s.size(), 0.0)}};
  const auto st = estimate_operator_norm(s, identity, 2.0, 2.0, with_zero);
  CHECK(st.skipped == 1);
  CHECK(st.evaluated == 1);
}

TEST_CASE("endpoint ratio on S3 against direct evaluation") {
  const Space s = make_s3();
  const BallIndex idx(s, fit_space_constants(s));
  KernelSpec spec;
  spec.alpha = 0.5;
  const KernelOperator op(spec, s);
  const auto sym = make_symbols(idx, 1, 1.0, {1.0}, 13);
  REQUIRE(sym.norms.size() == 1);
  CHECK(sym.norms[0] == doctest::Approx(1.0).epsilon(1e-12));
  // The rescaled symbol has unit Osc_{exp L} norm by the oracle too.
  const double exp_term = oracle::osc_exp_term(s, sym.b[0], 1.0, idx.beta6());
  CHECK(osc_exp_norm(idx, sym.b[0], 1.0).value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::isfinite(exp_term));
  for (const FunctionVec& f : {FunctionVec{1, 0, 0}, FunctionVec{0.3, -1.2, 2.0}, FunctionVec{1, 1, 1}}) {
    const auto g = multilinear_commutator(sym.b, op, f);
    const auto og = oracle::multilinear(s, sym.b, f, 0.5);
    CHECK(oracle::max_rel_err(g, og) <= 1e-12);
    double lam = 0.0;
    const double v = endpoint_ratio(s, g, f, {1.0}, {1.0}, 24, &lam);
    CHECK(oracle::rel_err(v, oracle::endpoint(s, og, f, {1.0}, {1.0}, oracle::endpoint_grid(og, 24))) <= 1e-10);
    CHECK(lam > 0.0);
  }
  CHECK(endpoint_ratio(s, {0, 0, 0}, {1, 0, 0}, {1.0}, {1.0}, 24) == 0.0);
  // The sum has one term per subset of {1..k}.
  CHECK(endpoint_rhs_sum(s, {1, 0, 0}, 1.0, {}) == 1.0);
  CHECK(endpoint_rhs_sum(s, {1, 0, 0}, 1.0, {2.0}) == doctest::Approx(1.0 + oracle::phi_s(oracle::phi_s(1.0, 0.5), 0.5)));
}

TEST_CASE("Welland ratio on S3") {
  const Space s = make_s3();
  const FunctionVec e0{1, 0, 0};
  const auto w = welland_ratio(s, e0, 0.5, 0.25, DiagonalConvention::kExclude);
  const double i_f = oracle::apply_T(s, e0, 0.5)[1];
  const double mp = oracle::M_alpha(s, e0, 1.0, 6.0, 0.75)[1];
  const double mm = oracle::M_alpha(s, e0, 1.0, 6.0, 0.25)[1];
  CHECK(oracle::rel_err(w[1], std::abs(i_f) / std::sqrt(mp * mm)) <= 1e-12);
  CHECK(w[1] == doctest::Approx(1.2247448713915887).epsilon(1e-3));
  CHECK(w[1] == doctest::Approx(std::sqrt(0.5) * std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(welland_ratio(s, e0, 0.5, 0.5, DiagonalConvention::kExclude), Error);
  const auto z = welland_ratio(s, {0, 0, 0}, 0.5, 0.25, DiagonalConvention::kExclude);
  for (double v : z) CHECK(std::isnan(v));
}

TEST_CASE("local kernel mass statistic on S3") {
  const Space s = make_s3();
  const auto st = lemma_4_3_statistic(s, 0.5, DiagonalConvention::kExclude);
  double best = 0.0;
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t r = 0; r < 3; ++r) {
      const double d = s.distance(x, r);
      if (d == 0.0) continue;
      double sum = 0.0;
      for (std::size_t y = 0; y < 3; ++y)
        if (s.distance(x, y) <= d) sum += oracle::kernel(s, x, y, 0.5) * s.weight(y);
      best = std::max(best, sum / std::sqrt(s.lambda_at(x, d)));
    }
  CHECK(oracle::rel_err(st.value, best) <= 1e-12);
}

TEST_CASE("N over sharp suite on S3 against the oracle") {
  const auto cfg = config_from_json(nlohmann::json{
      {"fixtures", {{{"name", "s3"}, {"generator", "s3"}}}},
      {"families", {{{"tag", "random"}, {"count", 3}, {"seed", 5}}}},
      {"rbmo_family_limit", 10},
      {"suites", {"lemma_3_6"}}});
  const auto cases = build_cases(cfg);
  REQUIRE(cases.size() == 1);
  const auto rep = suite_lemma_3_6(cfg, cases);
  REQUIRE(rep.rows.size() == 1);
  FamilySpec fs = cfg.families[0];
  fs.seed += cfg.seed;
  fs.mean_zero = true;
  const Space& s = *cases[0].space;
  const BallIndex idx(s, cases[0].constants);
  double best = 0.0;
  for (const auto& nf : make_function_family(s, fs))
    best = std::max(best, oracle::lp(s, oracle::N(s, nf.f, idx.beta6()), 2.0) /
                              oracle::lp(s, oracle::sharp(s, nf.f, 0.5, idx.beta6()), 2.0));
  CHECK(oracle::rel_err(rep.rows[0].value, best) <= 1e-12);
  CHECK(rep.rows[0].evaluated == 3);

  const FunctionVec f{1, 0, -1};
  const double direct = lp_norm(s, maximal_N(idx, f), 2.0) / lp_norm(s, sharp_maximal(idx, f, 0.5), 2.0);
  const double o = oracle::lp(s, oracle::N(s, f, idx.beta6()), 2.0) /
                   oracle::lp(s, oracle::sharp(s, f, 0.5, idx.beta6()), 2.0);
  CHECK(oracle::rel_err(direct, o) <= 1e-12);
}

TEST_CASE("report formatting is deterministic") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
  SuiteReport rep;
  rep.suite = "x";
  rep.rows.push_back(StatRow{"fix", 4, true, "stat(a,b)", 1.5, "w", 3, 1});
  rep.rows.push_back(StatRow{"fix", 8, true, "stat(a,b)", 3.0, "w\"q", 3, 0});
  const std::string csv = report_to_csv(rep);
  CHECK(csv == "suite,fixture,n,statistic,value,evaluated,skipped,witness\n"
               "x,fix,4,\"stat(a,b)\",1.5,3,1,w\n"
               "x,fix,8,\"stat(a,b)\",3,3,0,\"w\"\"q\"\n");
  CHECK(report_to_csv(rep) == csv);
  compute_trends(rep, [](const std::string&) { return 0.5; });
  REQUIRE(rep.trends.size() == 1);
  CHECK(rep.trends[0].growth == 1.0);
  CHECK_FALSE(rep.trends[0].passed);
  const auto base = baselines_from({rep});
  compare_baselines(rep, base, 1e-9);
  for (const auto& b : rep.baselines) CHECK(b.passed);
}

TEST_CASE("constant symbols are skipped") {
  const Space s = make_s3();
  const BallIndex idx(s, fit_space_constants(s));
  // make_symbols refuses a zero-norm symbol rather than dividing by zero.
  const Space one = testutil::single_point();
  const BallIndex i1(one, fit_space_constants(one));
  CHECK_THROWS_AS(make_symbols(i1, 1, 1.0, {}, 3), Error);
  const auto sym = make_symbols(idx, 2, 2.0, {}, 3);
  for (double n : sym.norms) CHECK(n == doctest::Approx(2.0).epsilon(1e-12));
}
