#include "nhfrac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhfrac/error.hpp"
#include "nhfrac/rng.hpp"

namespace nhfrac {

namespace {

double nearest_neighbor(const Space& space, std::size_t x) {
  const auto d = space.sorted_distances(x);
  return d.size() > 1 ? d[1] : 0.0;
}

std::complex<double> bergman_inner(const Space& space, std::size_t x, std::size_t y) {
  const auto& px = space.points()[x];
  const auto& py = space.points()[y];
  std::complex<double> s{0.0, 0.0};
  if (!px.zcoords.empty()) {
    for (std::size_t i = 0; i < px.zcoords.size(); ++i) s += std::conj(px.zcoords[i]) * py.zcoords[i];
  } else {
    for (std::size_t i = 0; i < px.coords.size(); ++i) s += px.coords[i] * py.coords[i];
  }
  return s;
}

}  // namespace

void validate_kernel(const KernelSpec& spec, const Space& space) {
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw Error("kernel alpha must lie in (0, 1)");
  if (const auto* c = std::get_if<CustomMatrixKernel>(&spec.kind)) {
    const std::size_t n = space.size();
    if (c->values.size() != n * n) throw Error("custom kernel matrix has wrong size");
    for (std::size_t i = 0; i < n; ++i)
      if (c->values[i * n + i] != 0.0) throw Error("custom kernel matrix needs a zero diagonal");
  }
  if (const auto* b = std::get_if<BergmanKernel>(&spec.kind)) {
    if (!(b->m > 0.0)) throw Error("bergman kernel exponent must be positive");
    for (const auto& p : space.points())
      if (p.zcoords.empty() && p.coords.empty()) throw Error("bergman kernel needs coordinates");
  }
}

double eval_kernel(const KernelSpec& spec, const Space& space, std::size_t x, std::size_t y) {
  const double power = 1.0 - spec.alpha;
  if (const auto* b = std::get_if<BergmanKernel>(&spec.kind)) {
    // Non-singular inside the open ball, the diagonal included.
    return std::pow(std::abs(1.0 - bergman_inner(space, x, y)), -b->m * power);
  }
  if (const auto* c = std::get_if<CustomMatrixKernel>(&spec.kind)) return c->values[x * space.size() + y];
  if (x == y) {
    switch (spec.diagonal) {
      case DiagonalConvention::kExclude: return 0.0;
      case DiagonalConvention::kAtomRadius: {
        const double nn = nearest_neighbor(space, x);
        const double r = nn > 0.0 ? nn / 2.0 : 1.0;
        return 1.0 / std::pow(space.lambda_at(x, r), power);
      }
      case DiagonalConvention::kNone: throw Error("kernel is singular on the diagonal; no convention set");
    }
  }
  return 1.0 / std::pow(space.lambda_at(y, space.distance(x, y)), power);
}

std::vector<double> kernel_matrix(const KernelSpec& spec, const Space& space) {
  validate_kernel(spec, space);
  const std::size_t n = space.size();
  std::vector<double> k(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) k[x * n + y] = eval_kernel(spec, space, x, y);
  return k;
}

SizeFit check_size_condition(const KernelSpec& spec, const Space& space) {
  const auto k = kernel_matrix(spec, space);
  const std::size_t n = space.size();
  SizeFit fit;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      const double c = std::abs(k[x * n + y]) * std::pow(space.lambda_at(x, space.distance(x, y)), 1.0 - spec.alpha);
      if (c > fit.c_size) {
        fit.c_size = c;
        fit.witness_x = x;
        fit.witness_y = y;
      }
    }
  }
  return fit;
}

SmoothFit check_smoothness_condition(const KernelSpec& spec, const Space& space,
                                     const std::vector<double>& delta_grid, const SmoothOptions& opts) {
  for (double d : delta_grid)
    if (!(d > 0.0 && d <= 1.0)) throw Error("smoothness delta must lie in (0, 1]");
  const auto k = kernel_matrix(spec, space);
  const std::size_t n = space.size();
  const double power = 1.0 - spec.alpha;
  SmoothFit fit;
  for (double d : delta_grid) fit.table.push_back(SmoothRow{d, 0.0, 0, 0, 0});

  auto visit = [&](std::size_t x, std::size_t xt, std::size_t y) {
    const double dxy = space.distance(x, y);
    const double dxx = space.distance(x, xt);
    if (x == xt || x == y || dxy < fit.c_k * dxx) return;
    ++fit.triples;
    const double diff = std::abs(k[x * n + y] - k[xt * n + y]) + std::abs(k[y * n + x] - k[y * n + xt]);
    const double lam = std::pow(space.lambda_at(x, dxy), power);
    for (auto& row : fit.table) {
      const double c = diff * std::pow(dxy / dxx, row.delta) * lam;
      if (c > row.c_smooth) {
        row.c_smooth = c;
        row.witness_x = x;
        row.witness_xt = xt;
        row.witness_y = y;
      }
    }
  };

  const double total = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
  if (total <= static_cast<double>(opts.triple_budget)) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t xt = 0; xt < n; ++xt)
        for (std::size_t y = 0; y < n; ++y) visit(x, xt, y);
  } else {
    fit.sampled = true;
    Rng rng(opts.seed);
    for (std::size_t s = 0; s < opts.triple_budget; ++s) visit(rng.index(n), rng.index(n), rng.index(n));
  }
  fit.empty = fit.triples == 0;
  if (!fit.empty && !fit.table.empty()) {
    fit.best = *std::min_element(fit.table.begin(), fit.table.end(),
                                 [](const SmoothRow& a, const SmoothRow& b) { return a.c_smooth < b.c_smooth; });
  }
  return fit;
}

DiagonalConvention diagonal_from_string(const std::string& s) {
  if (s == "exclude") return DiagonalConvention::kExclude;
  if (s == "atom-radius" || s == "atom_radius") return DiagonalConvention::kAtomRadius;
  if (s == "none") return DiagonalConvention::kNone;
  throw Error("unknown diagonal convention '" + s + "'");
}

const char* diagonal_name(DiagonalConvention d) {
  switch (d) {
    case DiagonalConvention::kExclude: return "exclude";
    case DiagonalConvention::kAtomRadius: return "atom-radius";
    case DiagonalConvention::kNone: return "none";
  }
  return "exclude";
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  KernelSpec spec;
  try {
    spec.alpha = j.value("alpha", 0.5);
    spec.diagonal = diagonal_from_string(j.value("diagonal", std::string("exclude")));
    const std::string type = j.value("type", std::string("frac_integral"));
    if (type == "frac_integral") {
      spec.kind = FracIntegralKernel{};
    } else if (type == "bergman") {
      spec.kind = BergmanKernel{j.value("m", 2.0)};
    } else if (type == "matrix") {
      CustomMatrixKernel c;
      for (const auto& row : j.at("values"))
        for (const auto& v : row) c.values.push_back(v.get<double>());
      spec.kind = std::move(c);
    } else {
      throw Error("unknown kernel type '" + type + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw Error("kernel alpha must lie in (0, 1)");
  return spec;
}

nlohmann::json kernel_to_json(const KernelSpec& spec) {
  nlohmann::json j{{"alpha", spec.alpha}, {"diagonal", diagonal_name(spec.diagonal)}};
  if (std::holds_alternative<FracIntegralKernel>(spec.kind)) j["type"] = "frac_integral";
  if (const auto* b = std::get_if<BergmanKernel>(&spec.kind)) {
    j["type"] = "bergman";
    j["m"] = b->m;
  }
  if (std::holds_alternative<CustomMatrixKernel>(spec.kind)) j["type"] = "matrix";
  return j;
}

}  // namespace nhfrac
