#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nhfrac/config.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/kernels.hpp"
#include "nhfrac/report.hpp"
#include "nhfrac/space_checks.hpp"

namespace nhfrac {

class BallIndex;

// A generated space with its fitted constants and test functions. The space
// lives on the heap so operators holding references stay valid.
struct FixtureCase {
  std::string name;
  std::size_t n = 0;
  bool ladder = false;
  std::unique_ptr<Space> space;
  SpaceConstants constants;
  std::vector<NamedFunction> family;
};

std::vector<FixtureCase> build_cases(const ExperimentConfig& cfg);

// Seed used by a suite on a case of size n.
std::uint64_t case_seed(std::uint64_t seed, std::size_t n);

using Transform = std::function<FunctionVec(const FunctionVec&)>;

struct Statistic {
  double value = 0.0;
  std::string witness;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

// max ||Op f||_q / ||f||_p over the family; zero-norm inputs are skipped.
Statistic estimate_operator_norm(const Space& space, const Transform& op, double p, double q,
                                 const std::vector<NamedFunction>& family);
// max weak_lp(Op f, q_weak) / ||f||_p over the family.
Statistic weak_type_statistic(const Space& space, const Transform& op, double p, double q_weak,
                              const std::vector<NamedFunction>& family);

// Random mean-zero symbols rescaled (by homogeneity) to the target norm:
// the RBMO norm when `osc_r` is empty, else Osc_{exp L^{r_j}}.
struct Symbols {
  std::vector<FunctionVec> b;
  std::vector<double> norms;  // measured norms after rescaling
};
Symbols make_symbols(const BallIndex& index, int k, double target, const std::vector<double>& osc_r,
                     std::uint64_t seed);

// sum_{j=0}^k sum_{sigma in C_j^k} Phi_{1/r_sigma}(|| Phi_{1/r_sigma}(|f| / lambda) ||_1),
// with C_0^k = {empty set} and Phi_0 the identity.
double endpoint_rhs_sum(const Space& space, const FunctionVec& f, double lambda, const std::vector<double>& r);
// Phi_{1/r}(prod_j norm_j) times endpoint_rhs_sum.
double endpoint_rhs(const Space& space, const FunctionVec& f, double lambda, const std::vector<double>& r,
                    const std::vector<double>& b_norms);
// max over the lambda grid of mu(|g| > lambda) / endpoint_rhs; `lambda_at_max` receives the maximizer.
double endpoint_ratio(const Space& space, const FunctionVec& g, const FunctionVec& f, const std::vector<double>& r,
                      const std::vector<double>& b_norms, std::size_t log_grid, double* lambda_at_max = nullptr);

// Pointwise |I_alpha f(x)| / sqrt(M^{(alpha+eps)}_{1,6} f(x) M^{(alpha-eps)}_{1,6} f(x)), NaN where the product is 0.
FunctionVec welland_ratio(const Space& space, const FunctionVec& f, double alpha, double eps,
                          DiagonalConvention diagonal);
// max over x and distinct positive distances d of
// [sum_{d(x,y) <= d} K_alpha(x, y) w_y] / lambda(x, d)^alpha.
Statistic lemma_4_3_statistic(const Space& space, double alpha, DiagonalConvention diagonal);

SuiteReport suite_thm_1_13(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases);
SuiteReport suite_thm_3_9_and_1_15(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases);
SuiteReport suite_thm_1_19(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases);
SuiteReport suite_welland_and_4_3(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases);
SuiteReport suite_lemma_3_6(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases);

SuiteReport run_suite(const std::string& name, const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases);

struct RunResult {
  std::vector<SuiteReport> reports;
  std::vector<std::string> failures;  // hard assertions and baseline excursions
  bool ok() const { return failures.empty(); }
};

struct RunOptions {
  bool write = true;
  std::string output_dir;  // overrides the config when non-empty
  bool record_baselines = false;
};

RunResult run(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace nhfrac
