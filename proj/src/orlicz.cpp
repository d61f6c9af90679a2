#include "nhfrac/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nhfrac/error.hpp"

namespace nhfrac {

namespace {

constexpr int kIndexGrid = 1024;
constexpr double kIndexLo = 1e-6;
constexpr double kIndexHi = 1e6;

double grid_point(int k, int count, double lo, double hi) {
  return lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
}

// Segment of a log-log table containing log value `lx`, clamped to the ends.
std::size_t segment(const std::vector<double>& lxs, double lx) {
  auto it = std::upper_bound(lxs.begin(), lxs.end(), lx);
  std::size_t i = it == lxs.begin() ? 0 : static_cast<std::size_t>(it - lxs.begin()) - 1;
  return std::min(i, lxs.size() - 2);
}

// Linear interpolation of (lx, ly) at lx = l, extended linearly past the ends.
double lin_interp(const std::vector<double>& lx, const std::vector<double>& ly, double l) {
  const std::size_t i = segment(lx, l);
  const double slope = (ly[i + 1] - ly[i]) / (lx[i + 1] - lx[i]);
  return ly[i] + slope * (l - lx[i]);
}

double lin_slope(const std::vector<double>& lx, const std::vector<double>& ly, double l) {
  const std::size_t i = segment(lx, l);
  return (ly[i + 1] - ly[i]) / (lx[i + 1] - lx[i]);
}

}  // namespace

OrliczFn::OrliczFn(PowerPhi p) : kind_(p) {
  if (!(p.p >= 1.0)) throw Error("power Orlicz function needs p >= 1");
}

OrliczFn::OrliczFn(ZygmundLogPhi z) : kind_(z) {
  if (!(z.s >= 0.0)) throw Error("zygmund Orlicz function needs s >= 0");
}

OrliczFn::OrliczFn(TabulatedPhi tab) : kind_(std::move(tab)) {
  const auto& t = std::get<TabulatedPhi>(kind_);
  if (t.t.size() < 2 || t.t.size() != t.phi.size()) throw Error("tabulated Orlicz function needs >= 2 samples");
  for (std::size_t i = 0; i < t.t.size(); ++i) {
    if (!(t.t[i] > 0.0) || !(t.phi[i] > 0.0)) throw Error("tabulated Orlicz samples must be positive");
    if (i > 0 && (!(t.t[i] > t.t[i - 1]) || !(t.phi[i] > t.phi[i - 1])))
      throw Error("tabulated Orlicz samples must be strictly increasing");
    log_t_.push_back(std::log(t.t[i]));
    log_phi_.push_back(std::log(t.phi[i]));
  }
}

double OrliczFn::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  return std::visit(
      [t, this](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PowerPhi>) {
          return std::pow(t, k.p);
        } else if constexpr (std::is_same_v<T, ZygmundLogPhi>) {
          return phi_s_eval(t, k.s);
        } else {
          return std::exp(lin_interp(log_t_, log_phi_, std::log(t)));
        }
      },
      kind_);
}

double OrliczFn::derivative(double t) const {
  if (t <= 0.0) t = 1e-300;
  return std::visit(
      [t, this](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PowerPhi>) {
          return k.p * std::pow(t, k.p - 1.0);
        } else if constexpr (std::is_same_v<T, ZygmundLogPhi>) {
          const double l = std::log(2.0 + t);
          return std::pow(l, k.s) + k.s * t * std::pow(l, k.s - 1.0) / (2.0 + t);
        } else {
          return (*this)(t) * lin_slope(log_t_, log_phi_, std::log(t)) / t;
        }
      },
      kind_);
}

double OrliczFn::index_ratio(double t) const {
  return std::visit(
      [t, this](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PowerPhi>) {
          return k.p;
        } else if constexpr (std::is_same_v<T, ZygmundLogPhi>) {
          return 1.0 + k.s * t / ((2.0 + t) * std::log(2.0 + t));
        } else {
          return lin_slope(log_t_, log_phi_, std::log(t));
        }
      },
      kind_);
}

double OrliczFn::inverse(double t) const {
  if (t <= 0.0) return 0.0;
  if (const auto* p = std::get_if<PowerPhi>(&kind_)) return std::pow(t, 1.0 / p->p);
  if (std::holds_alternative<TabulatedPhi>(kind_)) return std::exp(lin_interp(log_phi_, log_t_, std::log(t)));
  // Continuous and strictly increasing: bisection on log s.
  double lo = t, hi = t;
  const auto& self = *this;
  while (self(lo) > t) lo /= 2.0;
  while (self(hi) <= t) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (self(mid) > t) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::string OrliczFn::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PowerPhi>) {
          os << "power(p=" << k.p << ")";
        } else if constexpr (std::is_same_v<T, ZygmundLogPhi>) {
          os << "zygmund_log(s=" << k.s << ")";
        } else {
          os << "table(" << k.t.size() << " samples)";
        }
      },
      kind_);
  return os.str();
}

OrliczIndices orlicz_indices(const OrliczFn& phi) {
  OrliczIndices out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int k = 0; k < kIndexGrid; ++k) {
    const double r = phi.index_ratio(grid_point(k, kIndexGrid, kIndexLo, kIndexHi));
    out.a = std::min(out.a, r);
    out.b = std::max(out.b, r);
  }
  return out;
}

bool is_convex_on_grid(const OrliczFn& phi) {
  for (int k = 1; k + 1 < kIndexGrid; ++k) {
    const double a = grid_point(k - 1, kIndexGrid, kIndexLo, kIndexHi);
    const double m = grid_point(k, kIndexGrid, kIndexLo, kIndexHi);
    const double b = grid_point(k + 1, kIndexGrid, kIndexLo, kIndexHi);
    const double secant = phi(a) + (phi(b) - phi(a)) * (m - a) / (b - a);
    if (phi(m) > secant * (1.0 + 1e-12)) return false;
  }
  return true;
}

OrliczFn psi_from_phi(const OrliczFn& phi, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("psi_from_phi: alpha must lie in (0, 1)");
  constexpr int kGrid = 1025;
  TabulatedPhi tab;
  for (int k = 0; k < kGrid; ++k) {
    const double t = grid_point(k, kGrid, 1e-12, 1e12);
    const double u = phi.inverse(t) * std::pow(t, -alpha);
    if (!tab.t.empty() && !(u > tab.t.back())) {
      std::ostringstream os;
      os << "psi_from_phi: Phi^{-1}(t) t^{-alpha} is not increasing near t = " << t;
      throw Error(os.str());
    }
    tab.t.push_back(u);
    tab.phi.push_back(t);
  }
  return OrliczFn(std::move(tab));
}

double phi_s_eval(double t, double s) {
  if (t <= 0.0) return 0.0;
  if (s == 0.0) return t;
  return t * std::pow(std::log(2.0 + t), s);
}

OrliczFn orlicz_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "power") return OrliczFn(PowerPhi{j.at("p").get<double>()});
    if (type == "zygmund_log") return OrliczFn(ZygmundLogPhi{j.value("s", 1.0)});
    if (type == "table")
      return OrliczFn(TabulatedPhi{j.at("t").get<std::vector<double>>(), j.at("phi").get<std::vector<double>>()});
    throw Error("unknown Orlicz type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: ") + e.what());
  }
}

nlohmann::json orlicz_to_json(const OrliczFn& phi) {
  return std::visit(
      [](const auto& k) -> nlohmann::json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, PowerPhi>) {
          return {{"type", "power"}, {"p", k.p}};
        } else if constexpr (std::is_same_v<T, ZygmundLogPhi>) {
          return {{"type", "zygmund_log"}, {"s", k.s}};
        } else {
          return {{"type", "table"}, {"t", k.t}, {"phi", k.phi}};
        }
      },
      phi.kind());
}

}  // namespace nhfrac
