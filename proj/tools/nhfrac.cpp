#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nhfrac/ball_index.hpp"
#include "nhfrac/config.hpp"
#include "nhfrac/czd.hpp"
#include "nhfrac/error.hpp"
#include "nhfrac/fixtures.hpp"
#include "nhfrac/geometry.hpp"
#include "nhfrac/kernels.hpp"
#include "nhfrac/norms.hpp"
#include "nhfrac/operators.hpp"
#include "nhfrac/orlicz.hpp"
#include "nhfrac/report.hpp"
#include "nhfrac/space_checks.hpp"
#include "nhfrac/suites.hpp"

using namespace nhfrac;
using nlohmann::json;

namespace {

// Inline JSON text or a path to a JSON file.
json json_arg(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && (s[first] == '{' || s[first] == '[')) return json::parse(s);
  std::ifstream in(s);
  if (!in) throw Error("cannot read '" + s + "'");
  return json::parse(in);
}

// A space document, or a fixture spec carrying a "generator" field.
Space space_arg(const std::string& s) {
  const json j = json_arg(s);
  return j.contains("generator") ? make_space(j) : space_from_json(j);
}

FunctionVec function_arg(const std::string& s) {
  const json j = json_arg(s);
  return (j.is_object() ? j.at("values") : j).get<FunctionVec>();
}

// "id,radius"
Ball ball_arg(const Space& space, const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error("ball must be given as id,radius");
  return Ball{space.index_of(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

json vec_json(const FunctionVec& v) {
  json a = json::array();
  for (double x : v) a.push_back(format_double(x));
  return a;
}

json ball_json(const Space& space, const Ball& b) {
  return {{"center", space.points()[b.center].id}, {"radius", format_double(b.radius)}};
}

double p_arg(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfinity;
  return std::stod(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete fractional integrals and commutators on non-homogeneous metric measure spaces"};
  app.require_subcommand(1);

  std::string space_path, kernel_text, f_path, config_path, out_dir, suite_name, kind = "lp", phi_text, b_text,
      s_text, p_text = "2";
  double p = 1.0, t = 1.0, gamma0 = 0.0, r = 1.0, rho = 2.0, alpha = 0.0;
  bool no_precondition = false, record = false;

  auto* check = app.add_subcommand("check-space", "validate a space and report its fitted constants");
  check->add_option("space", space_path, "space document or fixture spec")->required();

  auto* apply = app.add_subcommand("apply", "apply a kernel operator to a function");
  apply->add_option("--space", space_path)->required();
  apply->add_option("--kernel", kernel_text, "kernel spec (JSON text or file)")->required();
  apply->add_option("--f", f_path, "function values (JSON list or file)")->required();

  auto* czd = app.add_subcommand("czd", "Calderon-Zygmund decomposition at level t");
  czd->add_option("--space", space_path)->required();
  czd->add_option("--f", f_path)->required();
  czd->add_option("--p", p)->required();
  czd->add_option("--t", t)->required();
  czd->add_option("--gamma0", gamma0, "selection constant (0: default)");
  czd->add_flag("--no-precondition", no_precondition, "allow levels at or below the admissible bound");

  auto* norm = app.add_subcommand("norm", "function norms");
  norm->add_option("--space", space_path)->required();
  norm->add_option("--f", f_path)->required();
  norm->add_option("--kind", kind, "lp | weak | orlicz | rbmo | osc")
      ->check(CLI::IsMember({"lp", "weak", "orlicz", "rbmo", "osc"}));
  norm->add_option("--p", p_text, "exponent (inf allowed for lp)");
  norm->add_option("--phi", phi_text, "Orlicz function spec");
  norm->add_option("--r", r, "exponential exponent for osc");
  norm->add_option("--rho", rho, "dilation for rbmo");

  auto* coeff = app.add_subcommand("coeff", "ball coefficients");
  coeff->add_option("--space", space_path)->required();
  coeff->add_option("--kind", kind, "K | Ktilde | Ktilde-alpha")->check(CLI::IsMember({"K", "Ktilde", "Ktilde-alpha"}));
  coeff->add_option("--b", b_text, "inner ball id,radius")->required();
  coeff->add_option("--s", s_text, "outer ball id,radius")->required();
  coeff->add_option("--alpha", alpha);

  auto* suite = app.add_subcommand("suite", "run one suite");
  suite->add_option("name", suite_name)->required();
  suite->add_option("--config", config_path)->required();
  suite->add_option("--out", out_dir, "report directory (overrides the config)");

  auto* runc = app.add_subcommand("run", "run the suites selected by a config");
  runc->add_option("--config", config_path)->required();
  runc->add_option("--out", out_dir, "report directory (overrides the config)");
  runc->add_flag("--record-baselines", record, "write the regression baselines instead of comparing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      const Space space = space_arg(space_path);
      const auto ud = check_upper_doubling(space);
      const auto reg = check_lambda_regularity(space);
      const auto gd = check_geometric_doubling(space);
      json out{{"name", space.name()},
               {"n", space.size()},
               {"metric", metric_kind_name(space.metric_kind())},
               {"total_mass", format_double(space.total_mass())},
               {"diameter", format_double(space.diameter())},
               {"triangle_constant", format_double(space.triangle_constant())},
               {"canonical_balls", space.canonical_balls().size()},
               {"upper_doubling", ud.passed},
               {"c_lambda", format_double(ud.c_lambda)},
               {"regularity_constant", format_double(reg.constant)},
               {"n0", gd.n0}};
      json viol = json::array();
      for (const auto& v : ud.violations)
        viol.push_back({{"center", space.points()[v.center].id},
                        {"radius", format_double(v.radius)},
                        {"mass", format_double(v.mass)},
                        {"lambda", format_double(v.lambda)}});
      out["violations"] = viol;
      std::cout << out.dump(2) << "\n";
      return ud.passed ? 0 : 1;
    }
    if (*apply) {
      const Space space = space_arg(space_path);
      const auto spec = kernel_from_json(json_arg(kernel_text));
      std::cout << vec_json(apply_T(spec, space, function_arg(f_path))).dump() << "\n";
      return 0;
    }
    if (*czd) {
      const Space space = space_arg(space_path);
      const auto constants = fit_space_constants(space);
      const auto f = function_arg(f_path);
      CZOptions opts;
      opts.gamma0 = gamma0;
      opts.enforce_t_precondition = !no_precondition;
      const auto cz = cz_decompose(space, constants, f, p, t, opts);
      const auto chk = verify_cz(space, f, cz);
      json balls = json::array();
      for (std::size_t j = 0; j < cz.balls.size(); ++j)
        balls.push_back({{"B", ball_json(space, cz.balls[j])},
                         {"R", ball_json(space, cz.doubling[j])},
                         {"phi", format_double(cz.phi_coeff[j])}});
      json out{{"t", format_double(cz.t)},
               {"p", format_double(cz.p)},
               {"gamma0", format_double(cz.gamma0)},
               {"balls", balls},
               {"g", vec_json(cz.g)},
               {"h", vec_json(cz.h)},
               {"whole_space_fallback", cz.whole_space_fallback},
               {"gamma", format_double(cz.gamma)},
               {"c_phi_inf", format_double(cz.c_phi_inf)},
               {"c_phi_lp", format_double(cz.c_phi_lp)},
               {"postconditions_passed", chk.passed},
               {"failures", chk.failures}};
      std::cout << out.dump(2) << "\n";
      return chk.passed ? 0 : 1;
    }
    if (*norm) {
      const Space space = space_arg(space_path);
      const auto f = function_arg(f_path);
      json out{{"kind", kind}};
      if (kind == "lp") {
        out["value"] = format_double(lp_norm(space, f, p_arg(p_text)));
      } else if (kind == "weak") {
        out["value"] = format_double(weak_lp(space, f, p_arg(p_text)));
      } else if (kind == "orlicz") {
        if (phi_text.empty()) throw Error("--phi is required for orlicz");
        out["value"] = format_double(luxemburg_norm(space, f, orlicz_from_json(json_arg(phi_text))));
      } else {
        const BallIndex index(space, fit_space_constants(space));
        if (kind == "rbmo") {
          const auto est = rbmo_norm(index, f, rho);
          out["value"] = format_double(est.value);
          out["oscillation"] = format_double(est.oscillation);
          out["regularity"] = format_double(est.regularity);
          out["witness_ball"] = ball_json(space, est.witness_ball);
        } else {
          const auto est = osc_exp_norm(index, f, r);
          out["value"] = format_double(est.value);
          out["exp_term"] = format_double(est.exp_term);
          out["regularity"] = format_double(est.regularity);
          out["witness_ball"] = ball_json(space, est.witness_ball);
        }
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*coeff) {
      const Space space = space_arg(space_path);
      const Ball b = ball_arg(space, b_text);
      const Ball s = ball_arg(space, s_text);
      CoefficientValue v;
      if (kind == "K") {
        v = coeff_K(space, b, s);
      } else if (kind == "Ktilde") {
        v = coeff_K_tilde(space, b, s);
      } else {
        v = coeff_K_tilde_alpha(space, b, s, alpha);
      }
      json terms = json::array();
      for (double x : v.terms) terms.push_back(format_double(x));
      std::cout << json{{"kind", kind}, {"value", format_double(v.value)}, {"n_bs", v.n_bs}, {"terms", terms}}.dump(2)
                << "\n";
      return 0;
    }
    if (*suite || *runc) {
      ExperimentConfig cfg = load_config(config_path);
      if (*suite) cfg.suites = {suite_name};
      RunOptions opts;
      opts.output_dir = out_dir;
      opts.record_baselines = record;
      const auto res = run(cfg, opts);
      for (const auto& rep : res.reports) {
        std::cout << rep.suite << ": " << rep.rows.size() << " rows";
        std::size_t gated = 0, failed = 0;
        for (const auto& tr : rep.trends) {
          if (tr.limit >= 0.0) ++gated;
          if (!tr.passed) ++failed;
        }
        std::cout << ", trends " << gated - failed << "/" << gated << " within limits\n";
      }
      for (const auto& f : res.failures) std::cerr << "FAIL " << f << "\n";
      return res.ok() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
