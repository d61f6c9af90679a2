#include "nhfrac/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "nhfrac/ball_index.hpp"
#include "nhfrac/czd.hpp"
#include "nhfrac/error.hpp"
#include "nhfrac/maximal.hpp"
#include "nhfrac/norms.hpp"
#include "nhfrac/operators.hpp"
#include "nhfrac/orlicz.hpp"
#include "nhfrac/rng.hpp"

namespace nhfrac {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string ball_str(const Space& space, const Ball& b) {
  return "B(" + space.points()[b.center].id + "," + format_double(b.radius) + ")";
}

std::vector<NamedFunction> family_for(const ExperimentConfig& cfg, const Space& space, bool mean_zero) {
  std::vector<NamedFunction> out;
  for (FamilySpec spec : cfg.families) {
    spec.seed += cfg.seed;
    spec.mean_zero = spec.mean_zero || mean_zero;
    auto part = make_function_family(space, spec);
    for (auto& nf : part) {
      nf.id = spec.tag + ":" + nf.id;
      out.push_back(std::move(nf));
    }
  }
  return out;
}

// Evenly spaced members, at most `limit` of them.
std::vector<NamedFunction> spread(const std::vector<NamedFunction>& family, std::size_t limit) {
  if (family.size() <= limit || limit == 0) return family;
  std::vector<NamedFunction> out;
  for (std::size_t i = 0; i < limit; ++i) out.push_back(family[i * family.size() / limit]);
  return out;
}

bool is_zero(const FunctionVec& f) {
  return std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; });
}

StatRow make_row(const FixtureCase& c, std::string statistic, const Statistic& st) {
  StatRow r;
  r.fixture = c.name;
  r.n = c.n;
  r.ladder = c.ladder;
  r.statistic = std::move(statistic);
  r.value = st.value;
  r.witness = st.witness;
  r.evaluated = st.evaluated;
  r.skipped = st.skipped;
  return r;
}

// Running max of ratios with the zero-denominator skip rule.
struct RatioMax {
  Statistic st;
  void add(double numerator, double denominator, const std::string& witness) {
    if (!(denominator > 0.0)) {
      ++st.skipped;
      return;
    }
    ++st.evaluated;
    const double v = numerator / denominator;
    if (st.evaluated == 1 || v > st.value) {
      st.value = v;
      st.witness = witness;
    }
  }
};

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::size_t n) { return seed * 0x9e3779b97f4a7c15ull + n; }

std::vector<FixtureCase> build_cases(const ExperimentConfig& cfg) {
  std::vector<FixtureCase> cases;
  auto finish = [&](FixtureCase c) {
    c.constants = fit_space_constants(*c.space);
    c.family = family_for(cfg, *c.space, false);
    cases.push_back(std::move(c));
  };
  for (std::size_t n : cfg.ladder) {
    FixtureCase c;
    c.space = std::make_unique<Space>(make_space(cfg.ladder_fixture, n));
    c.name = cfg.ladder_fixture.value("name", cfg.ladder_fixture.value("generator", std::string("ladder")));
    c.n = c.space->size();
    c.ladder = true;
    finish(std::move(c));
  }
  for (const auto& spec : cfg.fixtures) {
    FixtureCase c;
    c.space = std::make_unique<Space>(make_space(spec));
    c.name = spec.at("name").get<std::string>();
    c.n = c.space->size();
    finish(std::move(c));
  }
  return cases;
}

Statistic estimate_operator_norm(const Space& space, const Transform& op, double p, double q,
                                 const std::vector<NamedFunction>& family) {
  if (family.empty()) throw Error("estimate_operator_norm: empty family");
  RatioMax m;
  for (const auto& nf : family) {
    const double den = lp_norm(space, nf.f, p);
    if (!(den > 0.0)) {
      m.add(0.0, 0.0, nf.id);
      continue;
    }
    m.add(lp_norm(space, op(nf.f), q), den, nf.id);
  }
  return m.st;
}

Statistic weak_type_statistic(const Space& space, const Transform& op, double p, double q_weak,
                              const std::vector<NamedFunction>& family) {
  if (family.empty()) throw Error("weak_type_statistic: empty family");
  RatioMax m;
  for (const auto& nf : family) {
    const double den = lp_norm(space, nf.f, p);
    if (!(den > 0.0)) {
      m.add(0.0, 0.0, nf.id);
      continue;
    }
    m.add(weak_lp(space, op(nf.f), q_weak), den, nf.id);
  }
  return m.st;
}

Symbols make_symbols(const BallIndex& index, int k, double target, const std::vector<double>& osc_r,
                     std::uint64_t seed) {
  const Space& space = index.space();
  FamilySpec spec;
  spec.tag = "random";
  spec.count = static_cast<std::size_t>(k);
  spec.seed = seed;
  spec.mean_zero = true;
  auto fam = make_function_family(space, spec);
  Symbols out;
  for (std::size_t j = 0; j < fam.size(); ++j) {
    auto& b = fam[j].f;
    const double norm = osc_r.empty() ? rbmo_norm(index, b).value : osc_exp_norm(index, b, osc_r[j]).value;
    if (!(norm > 0.0)) throw Error("symbol generation: zero norm");
    const double scale = target / norm;
    for (auto& v : b) v *= scale;
    out.b.push_back(std::move(b));
    out.norms.push_back(norm * scale);
  }
  return out;
}

double endpoint_rhs_sum(const Space& space, const FunctionVec& f, double lambda, const std::vector<double>& r) {
  const int k = static_cast<int>(r.size());
  double l1 = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) l1 += std::abs(f[x]) / lambda * space.weight(x);
  double total = l1;
  for (int j = 1; j <= k; ++j) {
    for (const auto& sigma : sigma_subsets(k, j)) {
      double s = 0.0;
      for (int i : sigma.indices) s += 1.0 / r[static_cast<std::size_t>(i - 1)];
      double inner = 0.0;
      for (std::size_t x = 0; x < f.size(); ++x)
        if (f[x] != 0.0) inner += phi_s_eval(std::abs(f[x]) / lambda, s) * space.weight(x);
      total += phi_s_eval(inner, s);
    }
  }
  return total;
}

double endpoint_rhs(const Space& space, const FunctionVec& f, double lambda, const std::vector<double>& r,
                    const std::vector<double>& b_norms) {
  double s = 0.0, prod = 1.0;
  for (double ri : r) s += 1.0 / ri;
  for (double nb : b_norms) prod *= nb;
  return phi_s_eval(prod, s) * endpoint_rhs_sum(space, f, lambda, r);
}

double endpoint_ratio(const Space& space, const FunctionVec& g, const FunctionVec& f, const std::vector<double>& r,
                      const std::vector<double>& b_norms, std::size_t log_grid, double* lambda_at_max) {
  check_bound(space, g);
  const std::size_t n = g.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(g[a]) > std::abs(g[b]) || (std::abs(g[a]) == std::abs(g[b]) && a < b);
  });
  std::vector<double> vals(n), mass(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = std::abs(g[idx[i]]);
    mass[i + 1] = mass[i] + space.weight(idx[i]);
  }
  if (n == 0 || vals[0] == 0.0) {
    if (lambda_at_max) *lambda_at_max = 0.0;
    return 0.0;
  }
  // mu(|g| > lambda): the values are sorted descending.
  auto lhs = [&](double lambda) {
    const auto it = std::partition_point(vals.begin(), vals.end(), [&](double v) { return v > lambda; });
    return mass[static_cast<std::size_t>(it - vals.begin())];
  };
  std::vector<double> grid;
  for (std::size_t i = 0; i < n; ++i)
    if (vals[i] > 0.0 && (i == 0 || vals[i] != vals[i - 1])) grid.push_back(vals[i] * (1.0 - 1e-9));
  const double vmin = *std::min_element(grid.begin(), grid.end());
  const double vmax = vals[0];
  for (std::size_t i = 0; i < log_grid; ++i) {
    const double t = log_grid > 1 ? static_cast<double>(i) / static_cast<double>(log_grid - 1) : 0.0;
    grid.push_back(std::exp(std::log(vmin) + t * (std::log(vmax) - std::log(vmin))));
  }
  double best = 0.0, best_lambda = grid.front();
  for (double lambda : grid) {
    const double l = lhs(lambda);
    if (l == 0.0) continue;
    const double v = l / endpoint_rhs(space, f, lambda, r, b_norms);
    if (v > best) {
      best = v;
      best_lambda = lambda;
    }
  }
  if (lambda_at_max) *lambda_at_max = best_lambda;
  return best;
}

FunctionVec welland_ratio(const Space& space, const FunctionVec& f, double alpha, double eps,
                          DiagonalConvention diagonal) {
  if (!(eps > 0.0 && eps < std::min(alpha, 1.0 - alpha))) throw Error("welland: epsilon must lie in (0, min(alpha, 1 - alpha))");
  const auto i_f = apply_I_alpha(space, f, alpha, diagonal);
  const auto mp = maximal_M_alpha(space, f, 1.0, 6.0, alpha + eps);
  const auto mm = maximal_M_alpha(space, f, 1.0, 6.0, alpha - eps);
  FunctionVec out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double prod = mp[x] * mm[x];
    out[x] = prod > 0.0 ? std::abs(i_f[x]) / std::sqrt(prod) : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

Statistic lemma_4_3_statistic(const Space& space, double alpha, DiagonalConvention diagonal) {
  KernelSpec spec;
  spec.alpha = alpha;
  spec.diagonal = diagonal == DiagonalConvention::kNone ? DiagonalConvention::kExclude : diagonal;
  const KernelOperator op(spec, space);
  const std::size_t n = space.size();
  RatioMax m;
  for (std::size_t x = 0; x < n; ++x) {
    const auto order = space.order(x);
    const auto dist = space.sorted_distances(x);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += op.k(x, order[i]) * space.weight(order[i]);
      const double d = dist[i];
      if (d > 0.0 && (i + 1 == n || dist[i + 1] > d))
        m.add(s, std::pow(space.lambda_at(x, d), alpha), "x=" + space.points()[x].id + ",r=" + format_double(d));
    }
  }
  return m.st;
}

SuiteReport suite_thm_1_13(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases) {
  SuiteReport rep;
  rep.suite = "thm_1_13";
  const double alpha = cfg.kernel.alpha;
  const double q0 = 1.0 / (1.0 - alpha);
  rep.notes.push_back("RBMO values use the computable norm with rho = 2; it is equivalent to the defining norm up to a constant");
  for (const auto& c : cases) {
    const Space& space = *c.space;
    const KernelOperator op(cfg.kernel, space);
    const Transform T = [&](const FunctionVec& f) { return op.apply(f); };

    for (const auto& e : cfg.exponents)
      rep.rows.push_back(make_row(c, "strong(p=" + num(e.p) + ",q=" + num(e.q) + ")",
                                  estimate_operator_norm(space, T, e.p, e.q, c.family)));
    rep.rows.push_back(make_row(c, "weak(p=" + num(cfg.weak.p) + ",q=" + num(cfg.weak.q) + ")",
                                weak_type_statistic(space, T, cfg.weak.p, cfg.weak.q, c.family)));

    const BallIndex index(space, c.constants);
    RatioMax rb;
    for (const auto& nf : spread(c.family, cfg.rbmo_family_limit)) {
      const double den = lp_norm(space, nf.f, 1.0 / alpha);
      rb.add(den > 0.0 ? rbmo_norm(index, op.apply(nf.f)).value : 0.0, den, nf.id);
    }
    rep.rows.push_back(make_row(c, "rbmo_endpoint(p=" + num(1.0 / alpha) + ")", rb.st));

    std::vector<std::size_t> ids;
    const auto balls = space.canonical_balls();
    for (std::size_t id = 0; id < balls.size(); ++id)
      if (balls[id].count >= 2) ids.push_back(id);
    RatioMax strong, weak;
    if (ids.empty()) {
      rep.notes.push_back(c.name + ": no ball holds two points, no atomic blocks");
    } else {
      Rng rng(case_seed(cfg.seed, c.n));
      for (std::size_t i = 0; i < cfg.atomic_blocks; ++i) {
        const auto& cb = balls[ids[rng.index(ids.size())]];
        const auto order = space.order(cb.ball.center);
        Ball sub[2];
        for (auto& s : sub) {
          const std::size_t y = order[rng.index(cb.count)];
          const double room = cb.ball.radius - space.distance(cb.ball.center, y);
          s = Ball{y, room * (0.25 + 0.75 * rng.uniform())};
        }
        if (!(sub[0].radius > 0.0 && sub[1].radius > 0.0)) continue;
        const auto block = make_atomic_block(space, cb.ball, sub[0], sub[1]);
        const auto check = validate_atomic_block(space, block.b, block.ball, block.parts, kInfinity);
        const std::string id = "block" + std::to_string(i) + "[" + ball_str(space, cb.ball) + "]";
        if (!check.passed) {
          rep.failures.push_back(c.name + ": generated atomic block " + id + " failed validation");
          continue;
        }
        const auto tb = op.apply(block.b);
        strong.add(lp_norm(space, tb, q0), check.block_norm, id);
        weak.add(weak_lp(space, tb, q0), check.block_norm, id);
      }
    }
    rep.rows.push_back(make_row(c, "block_strong(q=" + num(q0) + ")", strong.st));
    rep.rows.push_back(make_row(c, "block_weak(q=" + num(q0) + ")", weak.st));
  }
  return rep;
}

SuiteReport suite_thm_3_9_and_1_15(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases) {
  SuiteReport rep;
  rep.suite = "thm_3_9_and_1_15";
  if (cfg.exponents.empty()) throw Error("thm_3_9_and_1_15: needs at least one exponent pair");
  const double alpha = cfg.kernel.alpha;
  const OrliczFn psi = psi_from_phi(cfg.phi, alpha);
  const auto ia = orlicz_indices(cfg.phi);
  const auto ib = orlicz_indices(psi);
  rep.constants["phi"] = cfg.phi.describe();
  rep.constants["phi_indices"] = {format_double(ia.a), format_double(ia.b)};
  rep.constants["psi_indices"] = {format_double(ib.a), format_double(ib.b)};
  if (!(ia.a > 1.0 && ia.b < 1e300 && ib.a > 1.0 && ib.b < 1e300))
    throw Error("thm_3_9_and_1_15: Orlicz indices outside (1, inf): a_Phi = " + format_double(ia.a) +
                ", b_Phi = " + format_double(ia.b) + ", a_Psi = " + format_double(ib.a) +
                ", b_Psi = " + format_double(ib.b));
  const ExponentPair e0 = cfg.exponents.front();
  const OrliczFn phi_p{PowerPhi{e0.p}};
  const OrliczFn psi_p = psi_from_phi(phi_p, alpha);
  const int k = cfg.commutator.k;
  rep.notes.push_back("symbol norms are the computable RBMO norm with rho = 2");

  for (const auto& c : cases) {
    const Space& space = *c.space;
    const KernelOperator op(cfg.kernel, space);
    const BallIndex index(space, c.constants);
    const auto sym = make_symbols(index, k, cfg.commutator.target_rbmo, {}, case_seed(cfg.commutator.seed, c.n));
    double prod = 1.0;
    for (double v : sym.norms) prod *= v;

    Statistic single0;
    for (std::size_t ei = 0; ei < cfg.exponents.size(); ++ei) {
      const auto& e = cfg.exponents[ei];
      RatioMax m;
      for (const auto& nf : c.family) {
        const double den = sym.norms[0] * lp_norm(space, nf.f, e.p);
        m.add(den > 0.0 ? lp_norm(space, commutator(sym.b[0], op, nf.f), e.q) : 0.0, den, nf.id);
      }
      if (ei == 0) single0 = m.st;
      rep.rows.push_back(make_row(c, "commutator(p=" + num(e.p) + ",q=" + num(e.q) + ")", m.st));
    }

    RatioMax ml;
    for (const auto& nf : c.family) {
      const double den = prod * luxemburg_norm(space, nf.f, cfg.phi);
      ml.add(den > 0.0 ? luxemburg_norm(space, multilinear_commutator(sym.b, op, nf.f), psi) : 0.0, den, nf.id);
    }
    rep.rows.push_back(make_row(c, "multilinear_orlicz(k=" + std::to_string(k) + ")", ml.st));

    RatioMax cons;
    for (const auto& nf : c.family) {
      const double den = sym.norms[0] * luxemburg_norm(space, nf.f, phi_p);
      cons.add(den > 0.0 ? luxemburg_norm(space, commutator(sym.b[0], op, nf.f), psi_p) : 0.0, den, nf.id);
    }
    Statistic diff;
    diff.value = single0.value > 0.0 ? std::abs(cons.st.value - single0.value) / single0.value : 0.0;
    diff.witness = "orlicz=" + format_double(cons.st.value) + ",lp=" + format_double(single0.value);
    diff.evaluated = cons.st.evaluated;
    diff.skipped = cons.st.skipped;
    rep.rows.push_back(make_row(c, "power_orlicz_vs_lp(p=" + num(e0.p) + ")", diff));
  }
  return rep;
}

SuiteReport suite_thm_1_19(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases) {
  SuiteReport rep;
  rep.suite = "thm_1_19";
  const auto& ep = cfg.endpoint;
  std::string tag = "endpoint(k=" + std::to_string(ep.k) + ",r=";
  for (std::size_t i = 0; i < ep.r.size(); ++i) tag += (i ? ":" : "") + num(ep.r[i]);
  tag += ")";
  rep.notes.push_back("right-hand side uses the Phi_{1/r} factors of the endpoint estimate; sigma = empty contributes ||f / lambda||_1");
  for (const auto& c : cases) {
    const Space& space = *c.space;
    const KernelOperator op(cfg.kernel, space);
    const BallIndex index(space, c.constants);
    const auto sym = make_symbols(index, ep.k, ep.target_osc, ep.r, case_seed(ep.seed, c.n));
    RatioMax m;
    for (const auto& nf : c.family) {
      if (is_zero(nf.f)) {
        m.add(0.0, 0.0, nf.id);
        continue;
      }
      double lam = 0.0;
      const double v = endpoint_ratio(space, multilinear_commutator(sym.b, op, nf.f), nf.f, ep.r, sym.norms,
                                      cfg.lambda_grid, &lam);
      m.add(v, 1.0, nf.id + ",lambda=" + format_double(lam));
    }
    rep.rows.push_back(make_row(c, tag, m.st));
  }
  return rep;
}

SuiteReport suite_welland_and_4_3(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases) {
  SuiteReport rep;
  rep.suite = "welland_and_4_3";
  const double alpha = cfg.kernel.alpha;
  const double eps = cfg.welland_epsilon;
  if (!(eps > 0.0 && eps < std::min(alpha, 1.0 - alpha)))
    throw Error("welland_and_4_3: epsilon " + format_double(eps) + " outside (0, min(alpha, 1 - alpha))");
  const std::vector<double> a_grid{2.0, 4.0};
  ReverseDoublingOptions rd_opts;
  rd_opts.k_max = 200;  // sum 2^{-k eps} needs about 80 terms to reach the tail threshold at eps = 1/4
  for (const auto& c : cases) {
    const Space& space = *c.space;
    const auto rd = check_weak_reverse_doubling(space, eps, a_grid, rd_opts);
    if (!rd.passed) {
      rep.notes.push_back(c.name + " (n=" + std::to_string(c.n) + "): lambda fails weak reverse doubling at eps = " +
                          format_double(eps) + ", skipped");
      continue;
    }
    RatioMax m;
    for (const auto& nf : c.family) {
      const auto ratio = welland_ratio(space, nf.f, alpha, eps, cfg.kernel.diagonal);
      for (std::size_t x = 0; x < ratio.size(); ++x) {
        if (std::isnan(ratio[x])) {
          m.add(0.0, 0.0, "");
          continue;
        }
        m.add(ratio[x], 1.0, nf.id + ",x=" + space.points()[x].id);
      }
    }
    rep.rows.push_back(make_row(c, "welland(eps=" + num(eps) + ")", m.st));
    rep.rows.push_back(make_row(c, "lemma_4_3", lemma_4_3_statistic(space, alpha, cfg.kernel.diagonal)));
  }
  return rep;
}

SuiteReport suite_lemma_3_6(const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases) {
  SuiteReport rep;
  rep.suite = "lemma_3_6";
  const double alpha = cfg.kernel.alpha;
  const double p = cfg.lemma_3_6_p;
  for (const auto& c : cases) {
    const Space& space = *c.space;
    const BallIndex index(space, c.constants);
    RatioMax m;
    for (const auto& nf : spread(family_for(cfg, space, true), cfg.rbmo_family_limit)) {
      if (is_zero(nf.f)) {
        m.add(0.0, 0.0, nf.id);
        continue;
      }
      const double den = lp_norm(space, sharp_maximal(index, nf.f, alpha), p);
      m.add(den > 0.0 ? lp_norm(space, maximal_N(index, nf.f), p) : 0.0, den, nf.id);
    }
    rep.rows.push_back(make_row(c, "N_over_sharp(p=" + num(p) + ",alpha=" + num(alpha) + ")", m.st));
  }
  return rep;
}

SuiteReport run_suite(const std::string& name, const ExperimentConfig& cfg, const std::vector<FixtureCase>& cases) {
  if (name == "thm_1_13") return suite_thm_1_13(cfg, cases);
  if (name == "thm_3_9_and_1_15") return suite_thm_3_9_and_1_15(cfg, cases);
  if (name == "thm_1_19") return suite_thm_1_19(cfg, cases);
  if (name == "welland_and_4_3") return suite_welland_and_4_3(cfg, cases);
  if (name == "lemma_3_6") return suite_lemma_3_6(cfg, cases);
  throw Error("unknown suite '" + name + "'");
}

RunResult run(const ExperimentConfig& cfg, const RunOptions& opts) {
  RunResult res;
  const std::string out_dir = opts.output_dir.empty() ? cfg.output_dir : opts.output_dir;
  nlohmann::json baselines;
  const bool compare = !opts.record_baselines && !cfg.baselines_path.empty() &&
                       std::filesystem::exists(cfg.baselines_path);
  if (compare) {
    std::ifstream in(cfg.baselines_path);
    try {
      in >> baselines;
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("schema: baselines: ") + e.what());
    }
  }

  std::vector<FixtureCase> cases;
  if (!cfg.suites.empty()) cases = build_cases(cfg);

  for (const auto& name : cfg.suites) {
    SuiteReport rep = run_suite(name, cfg, cases);
    for (const auto& r : rep.rows)
      if (!std::isfinite(r.value))
        rep.failures.push_back("non-finite statistic " + r.statistic + " on " + r.fixture);
    compute_trends(rep, [&](const std::string& stat) {
      for (const auto& t : cfg.trend_limits)
        if (t.suite == name && stat.rfind(t.prefix, 0) == 0) return t.limit;
      return -1.0;
    });
    if (compare) compare_baselines(rep, baselines, cfg.baseline_tolerance);
    for (const auto& f : rep.failures) res.failures.push_back(name + ": " + f);
    for (const auto& b : rep.baselines)
      if (!b.passed)
        res.failures.push_back(name + ": baseline exceeded for " + b.key + " (" + format_double(b.value) +
                               " vs " + format_double(b.baseline) + ")");
    res.reports.push_back(std::move(rep));
  }

  if (opts.record_baselines && !cfg.baselines_path.empty()) {
    std::ofstream out(cfg.baselines_path, std::ios::binary);
    if (!out) throw Error("cannot write '" + cfg.baselines_path + "'");
    out << baselines_from(res.reports).dump(2) << "\n";
  }

  if (opts.write) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json summary;
    summary["suites"] = cfg.suites;
    summary["failures"] = res.failures;
    summary["fixtures"] = nlohmann::json::array();
    for (const auto& c : cases)
      summary["fixtures"].push_back({{"name", c.name},
                                     {"n", c.n},
                                     {"ladder", c.ladder},
                                     {"c_lambda", format_double(c.constants.c_lambda)},
                                     {"n0", c.constants.n0},
                                     {"nu", format_double(c.constants.nu)},
                                     {"functions", c.family.size()}});
    for (const auto& rep : res.reports) write_report(rep, out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / "summary.json", std::ios::binary);
    if (!out) throw Error("cannot write summary in '" + out_dir + "'");
    out << summary.dump(2) << "\n";
  }
  return res;
}

}  // namespace nhfrac
