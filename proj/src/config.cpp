#include "nhfrac/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nhfrac/error.hpp"

namespace nhfrac {

namespace {

FamilySpec family_from_json(const nlohmann::json& j) {
  FamilySpec f;
  f.tag = j.at("tag").get<std::string>();
  f.count = j.value("count", f.count);
  f.seed = j.value("seed", f.seed);
  f.mean_zero = j.value("mean_zero", f.mean_zero);
  f.normalize_p = j.value("normalize_p", f.normalize_p);
  return f;
}

nlohmann::json family_to_json(const FamilySpec& f) {
  return {{"tag", f.tag}, {"count", f.count}, {"seed", f.seed}, {"mean_zero", f.mean_zero},
          {"normalize_p", f.normalize_p}};
}

CommutatorConfig symbols_from_json(const nlohmann::json& c, CommutatorConfig out) {
  const int k_old = out.k;
  out.k = c.value("k", out.k);
  out.target_rbmo = c.value("target_rbmo", out.target_rbmo);
  out.target_osc = c.value("target_osc", out.target_osc);
  if (c.contains("r")) {
    out.r = c.at("r").get<std::vector<double>>();
  } else if (out.k != k_old) {
    out.r.clear();
  }
  out.seed = c.value("seed", out.seed);
  return out;
}

nlohmann::json symbols_to_json(const CommutatorConfig& c) {
  return {{"k", c.k}, {"target_rbmo", c.target_rbmo}, {"target_osc", c.target_osc}, {"r", c.r}, {"seed", c.seed}};
}

void check_symbols(CommutatorConfig& c, const std::string& what) {
  if (c.k < 1) throw Error(what + ": k must be at least 1");
  if (c.r.empty()) c.r.assign(static_cast<std::size_t>(c.k), 1.0);
  if (c.r.size() != static_cast<std::size_t>(c.k)) throw Error(what + ": r must have k entries");
  for (double r : c.r)
    if (!(r >= 1.0)) throw Error(what + ": every r_i must be at least 1");
  if (!(c.target_rbmo > 0.0) || !(c.target_osc > 0.0)) throw Error(what + ": targets must be positive");
}

std::string resolve(const std::string& path, const std::string& base) {
  if (path.empty() || base.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base) / path).lexically_normal().string();
}

}  // namespace

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names{"thm_1_13", "thm_3_9_and_1_15", "thm_1_19", "welland_and_4_3",
                                              "lemma_3_6"};
  return names;
}

void check_exponent_pair(const ExponentPair& e, double alpha) {
  if (!(e.p >= 1.0) || !(e.q >= 1.0)) throw Error("exponents: p and q must be at least 1");
  const double gap = 1.0 / e.q - (1.0 / e.p - alpha);
  if (std::abs(gap) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "exponents: 1/q - (1/p - alpha) = " << gap << " for p = " << e.p << ", q = " << e.q
       << ", alpha = " << alpha;
    throw Error(os.str());
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir) {
  ExperimentConfig cfg;
  try {
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.baselines_path = resolve(j.value("baselines", std::string()), base_dir);
    cfg.baseline_tolerance = j.value("baseline_tolerance", cfg.baseline_tolerance);
    if (j.contains("ladder")) {
      cfg.ladder_fixture = j.at("ladder").at("fixture");
      cfg.ladder = j.at("ladder").at("n").get<std::vector<std::size_t>>();
    }
    if (j.contains("fixtures"))
      for (const auto& f : j.at("fixtures")) {
        if (!f.contains("name")) throw Error("schema: every fixture needs a name");
        cfg.fixtures.push_back(f);
      }
    if (j.contains("kernel")) cfg.kernel = kernel_from_json(j.at("kernel"));
    if (j.contains("exponents"))
      for (const auto& e : j.at("exponents")) cfg.exponents.push_back({e.at("p").get<double>(), e.at("q").get<double>()});
    if (j.contains("weak")) cfg.weak = {j.at("weak").at("p").get<double>(), j.at("weak").at("q").get<double>()};
    if (j.contains("orlicz")) cfg.phi = orlicz_from_json(j.at("orlicz").at("phi"));
    if (j.contains("commutator")) cfg.commutator = symbols_from_json(j.at("commutator"), cfg.commutator);
    if (j.contains("endpoint")) cfg.endpoint = symbols_from_json(j.at("endpoint"), cfg.endpoint);
    if (j.contains("families"))
      for (const auto& f : j.at("families")) cfg.families.push_back(family_from_json(f));
    cfg.rbmo_family_limit = j.value("rbmo_family_limit", cfg.rbmo_family_limit);
    cfg.atomic_blocks = j.value("atomic_blocks", cfg.atomic_blocks);
    cfg.lambda_grid = j.value("lambda_grid", cfg.lambda_grid);
    cfg.welland_epsilon = j.value("welland_epsilon", cfg.welland_epsilon);
    cfg.lemma_3_6_p = j.value("lemma_3_6_p", cfg.lemma_3_6_p);
    cfg.suites = j.value("suites", cfg.suites);
    if (j.contains("trend_limits"))
      for (const auto& t : j.at("trend_limits"))
        cfg.trend_limits.push_back(
            {t.at("suite").get<std::string>(), t.value("prefix", std::string()), t.at("limit").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }

  const double alpha = cfg.kernel.alpha;
  for (const auto& e : cfg.exponents) check_exponent_pair(e, alpha);
  if (!(cfg.weak.p >= 1.0 && cfg.weak.q >= 1.0)) throw Error("weak: p and q must be at least 1");
  check_symbols(cfg.commutator, "commutator");
  check_symbols(cfg.endpoint, "endpoint");
  for (const auto& s : cfg.suites)
    if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
      throw Error("unknown suite '" + s + "'");
  for (std::size_t n : cfg.ladder)
    if (n == 0) throw Error("ladder: n must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
  return config_from_json(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["baselines"] = cfg.baselines_path;
  j["baseline_tolerance"] = cfg.baseline_tolerance;
  j["ladder"] = {{"fixture", cfg.ladder_fixture}, {"n", cfg.ladder}};
  j["fixtures"] = cfg.fixtures;
  j["kernel"] = kernel_to_json(cfg.kernel);
  j["exponents"] = nlohmann::json::array();
  for (const auto& e : cfg.exponents) j["exponents"].push_back({{"p", e.p}, {"q", e.q}});
  j["weak"] = {{"p", cfg.weak.p}, {"q", cfg.weak.q}};
  j["orlicz"] = {{"phi", orlicz_to_json(cfg.phi)}};
  j["commutator"] = symbols_to_json(cfg.commutator);
  j["endpoint"] = symbols_to_json(cfg.endpoint);
  j["families"] = nlohmann::json::array();
  for (const auto& f : cfg.families) j["families"].push_back(family_to_json(f));
  j["rbmo_family_limit"] = cfg.rbmo_family_limit;
  j["atomic_blocks"] = cfg.atomic_blocks;
  j["lambda_grid"] = cfg.lambda_grid;
  j["welland_epsilon"] = cfg.welland_epsilon;
  j["lemma_3_6_p"] = cfg.lemma_3_6_p;
  j["suites"] = cfg.suites;
  j["trend_limits"] = nlohmann::json::array();
  for (const auto& t : cfg.trend_limits)
    j["trend_limits"].push_back({{"suite", t.suite}, {"prefix", t.prefix}, {"limit", t.limit}});
  return j;
}

}  // namespace nhfrac
