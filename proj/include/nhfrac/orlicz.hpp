#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace nhfrac {

struct PowerPhi {
  double p = 2.0;
};

// t * ln(2 + t)^s
struct ZygmundLogPhi {
  double s = 1.0;
};

// Monotone samples interpolated linearly in log-log space; beyond the end
// knots the end segments are extended as power laws.
struct TabulatedPhi {
  std::vector<double> t;
  std::vector<double> phi;
};

class OrliczFn {
 public:
  OrliczFn() = default;
  explicit OrliczFn(PowerPhi p);
  explicit OrliczFn(ZygmundLogPhi z);
  explicit OrliczFn(TabulatedPhi tab);

  double operator()(double t) const;
  double derivative(double t) const;
  // inf{s > 0 : Phi(s) > t}
  double inverse(double t) const;
  // t Phi'(t) / Phi(t)
  double index_ratio(double t) const;

  const std::variant<PowerPhi, ZygmundLogPhi, TabulatedPhi>& kind() const { return kind_; }
  std::string describe() const;

 private:
  std::variant<PowerPhi, ZygmundLogPhi, TabulatedPhi> kind_{PowerPhi{}};
  std::vector<double> log_t_, log_phi_;  // tabulated case only
};

struct OrliczIndices {
  double a = 0.0;
  double b = 0.0;
};

// inf / sup of t Phi'(t) / Phi(t) over 1024 log-spaced t in [1e-6, 1e6].
OrliczIndices orlicz_indices(const OrliczFn& phi);

// Secant convexity test on the index grid.
bool is_convex_on_grid(const OrliczFn& phi);

// Psi with Psi^{-1}(t) = Phi^{-1}(t) t^{-alpha}, tabulated.
OrliczFn psi_from_phi(const OrliczFn& phi, double alpha);

// t * ln(2 + t)^s; s = 0 gives t.
double phi_s_eval(double t, double s);

OrliczFn orlicz_from_json(const nlohmann::json& j);
nlohmann::json orlicz_to_json(const OrliczFn& phi);

}  // namespace nhfrac
