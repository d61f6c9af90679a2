#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/kernels.hpp"
#include "nhfrac/orlicz.hpp"

namespace nhfrac {

struct ExponentPair {
  double p = 1.5;
  double q = 6.0;
};

// Trend gate: statistics of `suite` whose name starts with `prefix` may grow
// by at most `limit` (relative) per ladder step.
struct TrendLimit {
  std::string suite;
  std::string prefix;
  double limit = 0.25;
};

struct CommutatorConfig {
  int k = 2;
  double target_rbmo = 1.0;
  double target_osc = 1.0;
  std::vector<double> r;  // endpoint tuple r_1..r_k (defaults to all 1)
  std::uint64_t seed = 11;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "reports";
  std::string baselines_path;  // empty: no regression comparison
  double baseline_tolerance = 1e-6;

  nlohmann::json ladder_fixture;     // make_space spec applied at every ladder n
  std::vector<std::size_t> ladder;
  std::vector<nlohmann::json> fixtures;  // fixed fixtures, each with a "name"

  KernelSpec kernel;
  std::vector<ExponentPair> exponents;
  ExponentPair weak{1.0, 2.0};
  OrliczFn phi{PowerPhi{1.5}};
  CommutatorConfig commutator;
  CommutatorConfig endpoint{1, 1.0, 1.0, {1.0}, 13};  // symbols of the weak endpoint suite
  std::vector<FamilySpec> families;

  std::size_t rbmo_family_limit = 4;  // functions per case for the RBMO-valued statistics
  std::size_t atomic_blocks = 16;
  std::size_t lambda_grid = 24;       // log-spaced thresholds added to the jump points
  double welland_epsilon = 0.25;
  double lemma_3_6_p = 2.0;

  std::vector<std::string> suites;
  std::vector<TrendLimit> trend_limits;
};

const std::vector<std::string>& known_suites();

// Parses and validates; a relative baselines path is resolved against
// `base_dir`, the output directory against the working directory.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Throws with the measured discrepancy unless |1/q - (1/p - alpha)| <= 1e-12.
void check_exponent_pair(const ExponentPair& e, double alpha);

}  // namespace nhfrac
