#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace nhfrac {

enum class MetricKind { kMatrix, kEuclidean, kComplexBall };

struct PointRecord {
  std::string id;
  std::vector<double> coords;                 // real coordinates, euclidean metric
  std::vector<std::complex<double>> zcoords;  // complex coordinates, complex-ball quasi-metric
};

// lambda(x, r) = c0 * r^kappa
struct PowerLaw {
  double c0 = 1.0;
  double kappa = 1.0;
};

// lambda(x, r) = max{dist_to_boundary(x)^m, r^m} on the open unit ball of C^d.
struct BergmanLambda {
  double m = 2.0;
};

// lambda(x, r) = mu(B(x, r)); only a valid dominating function on doubling spaces.
struct MeasureBased {};

// Per-center right-continuous step function over an ascending radius grid.
// `values` has one row per point, or a single row shared by every center.
struct TabulatedLambda {
  std::vector<double> radii;
  std::vector<std::vector<double>> values;
};

using DominatingFn = std::variant<PowerLaw, BergmanLambda, MeasureBased, TabulatedLambda>;

// Open ball {y : d(center, y) < radius}.
struct Ball {
  std::size_t center = 0;
  double radius = 1.0;

  Ball dilate(double factor) const { return Ball{center, radius * factor}; }
  friend bool operator==(const Ball&, const Ball&) = default;
};

// Member of the finite ball family on which all ball suprema are attained:
// one ball per (center, distinct distance). `count` is the size of the realized
// set, which is always the first `count` entries of the center's neighbor order.
struct CanonicalBall {
  Ball ball;
  std::size_t count = 0;
  double mass = 0.0;
};

// Finite weighted point cloud standing in for a non-homogeneous metric measure
// space. Immutable after construction; every invariant is checked in the
// constructor and violations throw nhfrac::Error.
class Space {
 public:
  Space(std::string name, std::vector<PointRecord> points, MetricKind kind,
        std::vector<double> distances, std::vector<double> weights, DominatingFn lambda);

  // Coordinates-derived metric (euclidean or complex-ball).
  static Space from_coordinates(std::string name, std::vector<PointRecord> points, MetricKind kind,
                                std::vector<double> weights, DominatingFn lambda);

  const std::string& name() const { return name_; }
  std::size_t size() const { return n_; }
  MetricKind metric_kind() const { return kind_; }
  const std::vector<PointRecord>& points() const { return points_; }
  const DominatingFn& lambda() const { return lambda_; }

  double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  double total_mass() const { return total_mass_; }
  double diameter() const { return diameter_; }
  double min_positive_distance() const { return min_positive_distance_; }

  // Worst observed d(x,z) / (d(x,y) + d(y,z)); 1 or less for a true metric.
  double triangle_constant() const { return triangle_constant_; }

  // lambda(x, r); throws for r <= 0.
  double lambda_at(std::size_t x, double r) const;

  // Distance to the boundary of the unit ball; only for points with coordinates.
  double boundary_distance(std::size_t x) const;

  // Points sorted by distance from c (ties by index), with matching distances
  // and prefix masses (prefix_mass(c)[k] = mass of the first k neighbors).
  std::span<const std::size_t> order(std::size_t c) const;
  std::span<const double> sorted_distances(std::size_t c) const;
  std::span<const double> prefix_mass(std::size_t c) const;

  // Number of points with d(c, y) < r.
  std::size_t count_within(std::size_t c, double r) const;
  double mass_within(std::size_t c, double r) const;

  std::span<const std::size_t> members(const Ball& b) const;
  bool contains(const Ball& b, std::size_t y) const { return distance(b.center, y) < b.radius; }

  std::span<const CanonicalBall> canonical_balls(std::size_t c) const;
  std::span<const CanonicalBall> canonical_balls() const { return canonical_; }
  // Position of the first canonical ball of center c inside canonical_balls().
  std::size_t canonical_offset(std::size_t c) const { return canonical_offset_[c]; }

  // Log-spaced radii, `per_decade` per decade, from the minimum positive
  // distance to twice the diameter.
  std::vector<double> radius_grid(int per_decade = 32) const;

  std::size_t index_of(const std::string& id) const;

 private:
  void validate_and_index();

  std::string name_;
  std::size_t n_ = 0;
  std::vector<PointRecord> points_;
  MetricKind kind_ = MetricKind::kMatrix;
  std::vector<double> dist_;
  std::vector<double> weights_;
  DominatingFn lambda_;

  double total_mass_ = 0.0;
  double diameter_ = 0.0;
  double min_positive_distance_ = 0.0;
  double triangle_constant_ = 0.0;

  std::vector<std::size_t> order_;
  std::vector<double> sorted_dist_;
  std::vector<double> prefix_mass_;
  std::vector<CanonicalBall> canonical_;
  std::vector<std::size_t> canonical_offset_;
};

// mu(B): mass of the realized open ball.
double mu_ball(const Space& space, const Ball& ball);

double lambda_at(const Space& space, std::size_t x, double r);

// Parse and validate a space document (see README for the schema).
Space space_from_json(const nlohmann::json& doc);
Space load_space(const std::string& path);
nlohmann::json space_to_json(const Space& space);

const char* metric_kind_name(MetricKind kind);

}  // namespace nhfrac
