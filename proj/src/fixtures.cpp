#include "nhfrac/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "nhfrac/error.hpp"
#include "nhfrac/norms.hpp"
#include "nhfrac/rng.hpp"
#include "nhfrac/space_checks.hpp"

namespace nhfrac {

namespace {

std::vector<PointRecord> line_points(const std::vector<double>& xs) {
  std::vector<PointRecord> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back(PointRecord{std::to_string(i), {xs[i]}, {}});
  return pts;
}

Space with_power_lambda(const std::string& name, std::vector<PointRecord> pts, std::vector<double> weights,
                        double c0, double kappa) {
  if (c0 <= 0.0) {
    const Space probe = Space::from_coordinates(name, pts, MetricKind::kEuclidean, weights, PowerLaw{1.0, kappa});
    c0 = fit_power_c0(probe, kappa);
  }
  Space s = Space::from_coordinates(name, std::move(pts), MetricKind::kEuclidean, std::move(weights),
                                    PowerLaw{c0, kappa});
  if (!check_upper_doubling(s).passed) throw Error("fixture " + name + " fails upper doubling; raise c0");
  return s;
}

}  // namespace

double fit_power_c0(const Space& space, double kappa) {
  double c0 = 0.0;
  for (const auto& cb : space.canonical_balls()) c0 = std::max(c0, cb.mass / std::pow(cb.ball.radius, kappa));
  return c0 * (1.0 + 1e-9);
}

Space make_dyadic_line(const DyadicLineSpec& spec) {
  if (spec.n == 0) throw Error("dyadic line needs n >= 1");
  if (!(spec.kappa > 0.0)) throw Error("dyadic line needs kappa > 0");
  const double h = spec.spacing > 0.0 ? spec.spacing : (spec.n > 1 ? 1.0 / static_cast<double>(spec.n - 1) : 1.0);
  const double m = spec.point_mass > 0.0 ? spec.point_mass : 1.0 / static_cast<double>(spec.n);
  std::vector<double> xs(spec.n), w(spec.n, m);
  for (std::size_t i = 0; i < spec.n; ++i) xs[i] = static_cast<double>(i) * h;
  if (spec.weight_spread > 1.0) {
    Rng rng(spec.seed);
    double total = 0.0;
    for (auto& v : w) {
      v = std::exp(rng.uniform() * std::log(spec.weight_spread));
      total += v;
    }
    for (auto& v : w) v *= m * static_cast<double>(spec.n) / total;
  }
  return with_power_lambda("dyadic_line_" + std::to_string(spec.n), line_points(xs), std::move(w), spec.c0,
                           spec.kappa);
}

Space make_s3() {
  DyadicLineSpec spec;
  spec.n = 3;
  spec.kappa = 1.0;
  spec.c0 = 2.0;
  spec.spacing = 1.0;
  spec.point_mass = 1.0;
  Space s = make_dyadic_line(spec);
  return Space("S3", s.points(), MetricKind::kEuclidean, [&] {
    std::vector<double> d(9);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) d[i * 3 + j] = s.distance(i, j);
    return d;
  }(), {1.0, 1.0, 1.0}, PowerLaw{2.0, 1.0});
}

Space make_cantor_like(const CantorSpec& spec) {
  if (spec.level < 0 || spec.level > 12) throw Error("cantor level must lie in [0, 12]");
  const std::size_t n = std::size_t{1} << spec.level;
  std::vector<double> xs(n);
  for (std::size_t b = 0; b < n; ++b) {
    double x = 0.0, scale = 1.0;
    for (int k = spec.level - 1; k >= 0; --k) {
      scale /= 3.0;
      if ((b >> k) & 1u) x += 2.0 * scale;
    }
    xs[b] = x;
  }
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return with_power_lambda("cantor_" + std::to_string(spec.level), line_points(xs), std::move(w), spec.c0,
                           std::log(2.0) / std::log(3.0));
}

Space make_complex_ball(const ComplexBallSpec& spec) {
  if (spec.n == 0) throw Error("complex ball needs n >= 1");
  if (!(spec.m > 0.0 && spec.m <= 2.0)) throw Error("complex ball (d = 1) needs m in (0, 2]");
  Rng rng(spec.seed);
  std::vector<PointRecord> pts;
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::complex<double> z{0.0, 0.0};
    if (i > 0) {
      const double r = 0.9 * std::sqrt(rng.uniform());
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      z = std::polar(r, th);
    }
    pts.push_back(PointRecord{std::to_string(i), {}, {z}});
  }
  const std::vector<double> unit(spec.n, 1.0);
  const Space probe = Space::from_coordinates("complex_ball", pts, MetricKind::kComplexBall, unit, BergmanLambda{spec.m});
  double w = std::numeric_limits<double>::infinity();
  for (const auto& cb : probe.canonical_balls())
    w = std::min(w, probe.lambda_at(cb.ball.center, cb.ball.radius) / static_cast<double>(cb.count));
  return Space::from_coordinates("complex_ball_" + std::to_string(spec.n), std::move(pts), MetricKind::kComplexBall,
                                 std::vector<double>(spec.n, w), BergmanLambda{spec.m});
}

Space make_random_metric(const RandomMetricSpec& spec) {
  if (spec.n == 0) throw Error("random metric needs n >= 1");
  Rng rng(spec.seed);
  std::vector<PointRecord> pts;
  std::vector<double> w(spec.n);
  double total = 0.0;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    pts.push_back(PointRecord{std::to_string(i), {x, y}, {}});
    w[i] = std::exp(std::log(0.1) * rng.uniform());
    total += w[i];
  }
  for (auto& v : w) v /= total;
  const std::string name = "random_metric_" + std::to_string(spec.n);
  if (spec.measure_lambda)
    return Space::from_coordinates(name, std::move(pts), MetricKind::kEuclidean, std::move(w), MeasureBased{});
  return with_power_lambda(name, std::move(pts), std::move(w), 0.0, 2.0);
}

Space make_space(const nlohmann::json& spec, std::size_t n_override) {
  try {
    const std::string gen = spec.at("generator").get<std::string>();
    if (gen == "s3") return make_s3();
    if (gen == "dyadic_line") {
      DyadicLineSpec s;
      s.n = n_override ? n_override : spec.value("n", s.n);
      s.kappa = spec.value("kappa", s.kappa);
      s.c0 = spec.value("c0", s.c0);
      s.spacing = spec.value("spacing", s.spacing);
      s.point_mass = spec.value("point_mass", s.point_mass);
      s.weight_spread = spec.value("weight_spread", s.weight_spread);
      s.seed = spec.value("seed", s.seed);
      return make_dyadic_line(s);
    }
    if (gen == "cantor") {
      CantorSpec s;
      s.level = n_override ? static_cast<int>(std::lround(std::log2(static_cast<double>(n_override))))
                           : spec.value("level", s.level);
      s.c0 = spec.value("c0", s.c0);
      return make_cantor_like(s);
    }
    if (gen == "complex_ball") {
      ComplexBallSpec s;
      s.n = n_override ? n_override : spec.value("n", s.n);
      s.m = spec.value("m", s.m);
      s.seed = spec.value("seed", s.seed);
      return make_complex_ball(s);
    }
    if (gen == "random_metric") {
      RandomMetricSpec s;
      s.n = n_override ? n_override : spec.value("n", s.n);
      s.seed = spec.value("seed", s.seed);
      s.measure_lambda = spec.value("lambda", std::string("measure")) == "measure";
      return make_random_metric(s);
    }
    throw Error("unknown fixture generator '" + gen + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
}

std::vector<NamedFunction> make_function_family(const Space& space, const FamilySpec& spec) {
  if (spec.count == 0) throw Error("function family needs count >= 1");
  const std::size_t n = space.size();
  Rng rng(spec.seed);
  std::vector<NamedFunction> out;

  if (spec.tag == "indicators") {
    // Distinct realized sets, by first appearance; a set is identified by the
    // sum of per-point random keys, which is order independent.
    std::vector<std::uint64_t> key(n);
    Rng keys(0x1d1ca7u);
    for (auto& k : key) k = keys.next();
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::pair<std::size_t, std::size_t>> sets;  // (center, count)
    for (std::size_t c = 0; c < n; ++c) {
      const auto order = space.order(c);
      std::uint64_t h = 0;
      std::size_t k = 0;
      for (const auto& cb : space.canonical_balls(c)) {
        for (; k < cb.count; ++k) h += key[order[k]];
        if (seen.insert(h).second) sets.emplace_back(c, cb.count);
      }
    }
    std::vector<std::size_t> pick;
    if (sets.size() <= spec.count) {
      for (std::size_t i = 0; i < sets.size(); ++i) pick.push_back(i);
    } else {
      for (std::size_t i = 0; i < spec.count; ++i) pick.push_back(i * sets.size() / spec.count);
    }
    for (std::size_t i : pick) {
      const auto [c, cnt] = sets[i];
      FunctionVec f(n, 0.0);
      const auto order = space.order(c);
      for (std::size_t k = 0; k < cnt; ++k) f[order[k]] = 1.0;
      out.push_back({"ind(c=" + space.points()[c].id + ",k=" + std::to_string(cnt) + ")", std::move(f)});
    }
  } else if (spec.tag == "signed") {
    for (std::size_t i = 0; i < spec.count; ++i) {
      FunctionVec f(n);
      for (auto& v : f) v = rng.uniform() < 0.5 ? -1.0 : 1.0;
      out.push_back({"signed" + std::to_string(i), std::move(f)});
    }
  } else if (spec.tag == "bumps") {
    const double diam = space.diameter() > 0.0 ? space.diameter() : 1.0;
    for (std::size_t i = 0; i < spec.count; ++i) {
      const std::size_t x0 = std::min(n - 1, static_cast<std::size_t>(std::floor(rng.uniform() * static_cast<double>(n))));
      const double s = diam * (0.05 + 0.45 * rng.uniform());
      FunctionVec f(n);
      for (std::size_t y = 0; y < n; ++y) {
        const double d = space.distance(x0, y);
        f[y] = std::exp(-(d * d) / (s * s));
      }
      out.push_back({"bump" + std::to_string(i) + "(x0=" + space.points()[x0].id + ")", std::move(f)});
    }
  } else if (spec.tag == "atoms") {
    const auto balls = space.canonical_balls();
    for (std::size_t i = 0; i < spec.count; ++i) {
      FunctionVec f(n, 0.0);
      const auto& cb = balls[rng.index(balls.size())];
      const auto order = space.order(cb.ball.center);
      if (cb.count >= 2) {
        const std::size_t half = cb.count / 2;
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t k = 0; k < cb.count; ++k) (k < half ? m1 : m2) += space.weight(order[k]);
        for (std::size_t k = 0; k < cb.count; ++k) f[order[k]] = k < half ? 1.0 / m1 : -1.0 / m2;
      } else {
        f[order[0]] = 1.0;
      }
      out.push_back({"atom" + std::to_string(i) + "(c=" + space.points()[cb.ball.center].id + ")", std::move(f)});
    }
  } else if (spec.tag == "random") {
    for (std::size_t i = 0; i < spec.count; ++i) {
      FunctionVec f(n);
      for (auto& v : f) v = rng.uniform(-1.0, 1.0);
      out.push_back({"random" + std::to_string(i), std::move(f)});
    }
  } else {
    throw Error("unknown function family '" + spec.tag + "'");
  }

  for (auto& nf : out) {
    if (spec.mean_zero) {
      double s = 0.0;
      for (std::size_t y = 0; y < n; ++y) s += nf.f[y] * space.weight(y);
      const double mean = s / space.total_mass();
      for (auto& v : nf.f) v -= mean;
      nf.id += "-mz";
    }
    if (spec.normalize_p > 0.0) {
      const double norm = lp_norm(space, nf.f, spec.normalize_p);
      if (norm > 0.0)
        for (auto& v : nf.f) v /= norm;
    }
  }
  return out;
}

}  // namespace nhfrac
