#include "nhfrac/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "nhfrac/error.hpp"
#include "nhfrac/rng.hpp"

namespace nhfrac {

namespace {

constexpr std::size_t kExhaustiveTriangleLimit = 256;
constexpr std::size_t kSampledTriangleChecks = 200000;
constexpr double kTriangleSlack = 1e-12;

double complex_ball_distance(const std::vector<std::complex<double>>& x,
                             const std::vector<std::complex<double>>& y) {
  double nx = 0.0, ny = 0.0;
  std::complex<double> inner{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx += std::norm(x[i]);
    ny += std::norm(y[i]);
    inner += std::conj(x[i]) * y[i];
  }
  nx = std::sqrt(nx);
  ny = std::sqrt(ny);
  double radial = std::abs(nx - ny);
  // The angular term is undefined at the origin; there only the radial part counts.
  if (nx == 0.0 || ny == 0.0) return radial;
  return radial + std::abs(1.0 - inner / (nx * ny));
}

double euclidean_distance(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::string fmt_triple(std::size_t i, std::size_t j, std::size_t k) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ", " << k << ")";
  return os.str();
}

}  // namespace

const char* metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::kMatrix: return "matrix";
    case MetricKind::kEuclidean: return "euclidean";
    case MetricKind::kComplexBall: return "complex_ball";
  }
  return "unknown";
}

Space::Space(std::string name, std::vector<PointRecord> points, MetricKind kind,
             std::vector<double> distances, std::vector<double> weights, DominatingFn lambda)
    : name_(std::move(name)),
      n_(points.size()),
      points_(std::move(points)),
      kind_(kind),
      dist_(std::move(distances)),
      weights_(std::move(weights)),
      lambda_(std::move(lambda)) {
  validate_and_index();
}

Space Space::from_coordinates(std::string name, std::vector<PointRecord> points, MetricKind kind,
                              std::vector<double> weights, DominatingFn lambda) {
  const std::size_t n = points.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.0;
      if (kind == MetricKind::kEuclidean) {
        if (points[i].coords.size() != points[j].coords.size() || points[i].coords.empty())
          throw Error("schema: euclidean metric needs real coords of equal dimension");
        v = euclidean_distance(points[i].coords, points[j].coords);
      } else if (kind == MetricKind::kComplexBall) {
        if (points[i].zcoords.size() != points[j].zcoords.size() || points[i].zcoords.empty())
          throw Error("schema: complex_ball metric needs complex coords of equal dimension");
        v = complex_ball_distance(points[i].zcoords, points[j].zcoords);
      } else {
        throw Error("schema: from_coordinates needs a coordinate metric");
      }
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return Space(std::move(name), std::move(points), kind, std::move(d), std::move(weights),
               std::move(lambda));
}

void Space::validate_and_index() {
  if (n_ == 0) throw Error("schema: space has no points");
  if (dist_.size() != n_ * n_) throw Error("schema: distance matrix has wrong size");
  if (weights_.size() != n_) throw Error("schema: weights length differs from point count");

  for (std::size_t i = 0; i < n_; ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      std::ostringstream os;
      os << "non-positive weight at point " << i << ": " << weights_[i];
      throw Error(os.str());
    }
  }
  total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);

  min_positive_distance_ = std::numeric_limits<double>::infinity();
  diameter_ = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double dij = dist_[i * n_ + j];
      if (!std::isfinite(dij) || dij < 0.0) {
        std::ostringstream os;
        os << "negative or non-finite distance at (" << i << ", " << j << ")";
        throw Error(os.str());
      }
      if (dij != dist_[j * n_ + i]) {
        std::ostringstream os;
        os << "asymmetric distance: d(" << i << ", " << j << ") != d(" << j << ", " << i << ")";
        throw Error(os.str());
      }
      if (i == j && dij != 0.0) throw Error("non-zero diagonal distance");
      if (i != j && dij == 0.0) {
        std::ostringstream os;
        os << "distinct points " << i << " and " << j << " at distance zero";
        throw Error(os.str());
      }
      if (i != j) min_positive_distance_ = std::min(min_positive_distance_, dij);
      diameter_ = std::max(diameter_, dij);
    }
  }
  if (n_ == 1) min_positive_distance_ = 0.0;

  // Triangle inequality: exhaustive on small spaces, sampled above. The
  // complex-ball rule is only a quasi-metric, so there the worst ratio is
  // recorded instead of rejected.
  const bool quasi = (kind_ == MetricKind::kComplexBall);
  triangle_constant_ = 0.0;
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    const double lhs = dist_[i * n_ + k];
    const double rhs = dist_[i * n_ + j] + dist_[j * n_ + k];
    if (rhs > 0.0) triangle_constant_ = std::max(triangle_constant_, lhs / rhs);
    if (!quasi && lhs > rhs * (1.0 + kTriangleSlack)) {
      throw Error("triangle inequality violated at " + fmt_triple(i, j, k));
    }
  };
  if (n_ <= kExhaustiveTriangleLimit) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) check(i, j, k);
  } else {
    Rng rng(0x7a11u);
    for (std::size_t s = 0; s < kSampledTriangleChecks; ++s)
      check(rng.index(n_), rng.index(n_), rng.index(n_));
  }

  // Neighbor orders and canonical balls.
  order_.resize(n_ * n_);
  sorted_dist_.resize(n_ * n_);
  prefix_mass_.resize(n_ * (n_ + 1));
  canonical_offset_.assign(n_ + 1, 0);
  canonical_.clear();
  std::vector<std::size_t> idx(n_);
  for (std::size_t c = 0; c < n_; ++c) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const double* row = &dist_[c * n_];
    std::sort(idx.begin(), idx.end(), [row](std::size_t a, std::size_t b) {
      return row[a] < row[b] || (row[a] == row[b] && a < b);
    });
    double* pm = &prefix_mass_[c * (n_ + 1)];
    pm[0] = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      order_[c * n_ + k] = idx[k];
      sorted_dist_[c * n_ + k] = row[idx[k]];
      pm[k + 1] = pm[k] + weights_[idx[k]];
    }
    canonical_offset_[c] = canonical_.size();
    const double* sd = &sorted_dist_[c * n_];
    const double ecc = sd[n_ - 1];
    std::size_t k = 0;
    while (k < n_) {
      std::size_t end = k;
      while (end < n_ && sd[end] == sd[k]) ++end;
      double radius = 0.0;
      if (end < n_) {
        radius = sd[end];
      } else {
        radius = ecc > 0.0 ? 2.0 * ecc : 1.0;
      }
      canonical_.push_back(CanonicalBall{Ball{c, radius}, end, pm[end]});
      k = end;
    }
  }
  canonical_offset_[n_] = canonical_.size();

  // Dominating function: positivity, shape and monotonicity in r.
  if (const auto* t = std::get_if<TabulatedLambda>(&lambda_)) {
    if (t->radii.empty()) throw Error("schema: lambda table has no radii");
    if (t->values.size() != 1 && t->values.size() != n_)
      throw Error("schema: lambda table needs one row or one row per point");
    for (const auto& row : t->values)
      if (row.size() != t->radii.size()) throw Error("schema: lambda table row length mismatch");
    for (std::size_t k = 1; k < t->radii.size(); ++k)
      if (!(t->radii[k] > t->radii[k - 1])) throw Error("schema: lambda table radii not ascending");
  }
  if (const auto* b = std::get_if<BergmanLambda>(&lambda_)) {
    if (!(b->m > 0.0)) throw Error("schema: bergman exponent must be positive");
    for (std::size_t i = 0; i < n_; ++i) {
      if (points_[i].zcoords.empty() && points_[i].coords.empty())
        throw Error("schema: bergman lambda needs point coordinates");
      if (!(boundary_distance(i) > 0.0)) throw Error("schema: point outside the open unit ball");
    }
  }
  if (const auto* p = std::get_if<PowerLaw>(&lambda_)) {
    if (!(p->c0 > 0.0) || !(p->kappa > 0.0)) throw Error("schema: power lambda needs c0, kappa > 0");
  }
  const double lo = n_ > 1 ? min_positive_distance_ : 1.0;
  const double hi = n_ > 1 ? 2.0 * diameter_ : 2.0;
  for (std::size_t x = 0; x < n_; ++x) {
    double prev = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double r = lo * std::pow(hi / lo, static_cast<double>(k) / 63.0);
      const double v = lambda_at(x, r);
      if (!(v > 0.0) || !std::isfinite(v)) throw Error("lambda not positive at point " + std::to_string(x));
      if (v < prev) throw Error("lambda not monotone in r at point " + std::to_string(x));
      prev = v;
    }
  }
}

double Space::lambda_at(std::size_t x, double r) const {
  if (!(r > 0.0)) throw Error("lambda radius must be positive");
  return std::visit(
      [&](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return fn.c0 * std::pow(r, fn.kappa);
        } else if constexpr (std::is_same_v<T, BergmanLambda>) {
          return std::max(std::pow(boundary_distance(x), fn.m), std::pow(r, fn.m));
        } else if constexpr (std::is_same_v<T, MeasureBased>) {
          return mass_within(x, r);
        } else {
          const auto& row = fn.values.size() == 1 ? fn.values[0] : fn.values[x];
          auto it = std::upper_bound(fn.radii.begin(), fn.radii.end(), r);
          if (it == fn.radii.begin()) return row.front();
          return row[static_cast<std::size_t>(it - fn.radii.begin()) - 1];
        }
      },
      lambda_);
}

double Space::boundary_distance(std::size_t x) const {
  const auto& p = points_[x];
  double s = 0.0;
  for (const auto& z : p.zcoords) s += std::norm(z);
  for (double v : p.coords) s += v * v;
  return 1.0 - std::sqrt(s);
}

std::span<const std::size_t> Space::order(std::size_t c) const {
  return {order_.data() + c * n_, n_};
}

std::span<const double> Space::sorted_distances(std::size_t c) const {
  return {sorted_dist_.data() + c * n_, n_};
}

std::span<const double> Space::prefix_mass(std::size_t c) const {
  return {prefix_mass_.data() + c * (n_ + 1), n_ + 1};
}

std::size_t Space::count_within(std::size_t c, double r) const {
  const double* sd = sorted_dist_.data() + c * n_;
  return static_cast<std::size_t>(std::lower_bound(sd, sd + n_, r) - sd);
}

double Space::mass_within(std::size_t c, double r) const {
  return prefix_mass_[c * (n_ + 1) + count_within(c, r)];
}

std::span<const std::size_t> Space::members(const Ball& b) const {
  return {order_.data() + b.center * n_, count_within(b.center, b.radius)};
}

std::span<const CanonicalBall> Space::canonical_balls(std::size_t c) const {
  return {canonical_.data() + canonical_offset_[c], canonical_offset_[c + 1] - canonical_offset_[c]};
}

std::vector<double> Space::radius_grid(int per_decade) const {
  const double lo = n_ > 1 ? min_positive_distance_ : 1.0;
  const double hi = n_ > 1 ? 2.0 * diameter_ : 2.0;
  const double decades = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / steps));
  return grid;
}

std::size_t Space::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (points_[i].id == id) return i;
  throw Error("unknown point id: " + id);
}

double mu_ball(const Space& space, const Ball& ball) {
  if (!(ball.radius > 0.0)) throw Error("ball radius must be positive");
  return space.mass_within(ball.center, ball.radius);
}

double lambda_at(const Space& space, std::size_t x, double r) { return space.lambda_at(x, r); }

// --- serialization -------------------------------------------------------

namespace {

DominatingFn lambda_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "power") return PowerLaw{j.value("c0", 1.0), j.value("kappa", 1.0)};
  if (type == "bergman") return BergmanLambda{j.at("m").get<double>()};
  if (type == "measure") return MeasureBased{};
  if (type == "table") {
    TabulatedLambda t;
    t.radii = j.at("radii").get<std::vector<double>>();
    const auto& v = j.at("values");
    if (!v.empty() && v.front().is_number()) {
      t.values.push_back(v.get<std::vector<double>>());
    } else {
      t.values = v.get<std::vector<std::vector<double>>>();
    }
    return t;
  }
  throw Error("schema: unknown lambda type '" + type + "'");
}

nlohmann::json lambda_to_json(const DominatingFn& fn) {
  return std::visit(
      [](const auto& f) -> nlohmann::json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return {{"type", "power"}, {"c0", f.c0}, {"kappa", f.kappa}};
        } else if constexpr (std::is_same_v<T, BergmanLambda>) {
          return {{"type", "bergman"}, {"m", f.m}};
        } else if constexpr (std::is_same_v<T, MeasureBased>) {
          return {{"type", "measure"}};
        } else {
          return {{"type", "table"}, {"radii", f.radii}, {"values", f.values}};
        }
      },
      fn);
}

}  // namespace

Space space_from_json(const nlohmann::json& doc) {
  try {
    const auto& pts = doc.at("points");
    if (!pts.is_array()) throw Error("schema: points must be a list");
    std::vector<PointRecord> points;
    points.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      PointRecord rec;
      rec.id = p.contains("id") ? (p["id"].is_string() ? p["id"].get<std::string>() : p["id"].dump())
                                : std::to_string(i);
      if (p.contains("coords")) {
        for (const auto& c : p["coords"]) {
          if (c.is_array()) {
            if (c.size() != 2) throw Error("schema: complex coordinate needs [re, im]");
            rec.zcoords.emplace_back(c[0].get<double>(), c[1].get<double>());
          } else {
            rec.coords.push_back(c.get<double>());
          }
        }
      }
      points.push_back(std::move(rec));
    }
    const auto weights = doc.at("weights").get<std::vector<double>>();
    const auto& metric = doc.at("metric");
    const std::string type = metric.at("type").get<std::string>();
    const std::string name = doc.value("name", std::string("space"));
    DominatingFn lambda = lambda_from_json(doc.at("lambda"));
    if (type == "matrix") {
      const auto rows = metric.at("values").get<std::vector<std::vector<double>>>();
      const std::size_t n = points.size();
      if (rows.size() != n) throw Error("schema: distance matrix row count differs from point count");
      std::vector<double> d;
      d.reserve(n * n);
      for (const auto& row : rows) {
        if (row.size() != n) throw Error("schema: distance matrix is not square");
        d.insert(d.end(), row.begin(), row.end());
      }
      return Space(name, std::move(points), MetricKind::kMatrix, std::move(d), weights, lambda);
    }
    if (type == "euclidean") {
      for (auto& p : points) {
        if (!p.zcoords.empty()) throw Error("schema: euclidean metric needs real coords");
      }
      return Space::from_coordinates(name, std::move(points), MetricKind::kEuclidean, weights, lambda);
    }
    if (type == "complex_ball") {
      for (auto& p : points) {
        // Real coordinates are read as complex numbers with zero imaginary part.
        if (p.zcoords.empty())
          for (double v : p.coords) p.zcoords.emplace_back(v, 0.0);
        p.coords.clear();
      }
      return Space::from_coordinates(name, std::move(points), MetricKind::kComplexBall, weights, lambda);
    }
    throw Error("schema: unknown metric type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
}

Space load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open space file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
  return space_from_json(doc);
}

nlohmann::json space_to_json(const Space& space) {
  nlohmann::json doc;
  doc["name"] = space.name();
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : space.points()) {
    nlohmann::json jp{{"id", p.id}};
    if (!p.zcoords.empty()) {
      nlohmann::json c = nlohmann::json::array();
      for (const auto& z : p.zcoords) c.push_back({z.real(), z.imag()});
      jp["coords"] = c;
    } else if (!p.coords.empty()) {
      jp["coords"] = p.coords;
    }
    pts.push_back(jp);
  }
  doc["points"] = pts;
  if (space.metric_kind() == MetricKind::kMatrix) {
    std::vector<std::vector<double>> rows(space.size(), std::vector<double>(space.size()));
    for (std::size_t i = 0; i < space.size(); ++i)
      for (std::size_t j = 0; j < space.size(); ++j) rows[i][j] = space.distance(i, j);
    doc["metric"] = {{"type", "matrix"}, {"values", rows}};
  } else {
    doc["metric"] = {{"type", metric_kind_name(space.metric_kind())}};
  }
  doc["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
  doc["lambda"] = lambda_to_json(space.lambda());
  return doc;
}

}  // namespace nhfrac
