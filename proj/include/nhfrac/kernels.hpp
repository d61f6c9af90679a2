#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "nhfrac/space.hpp"

namespace nhfrac {

// K(x, y) = 1 / lambda(y, d(x, y))^{1 - alpha}
struct FracIntegralKernel {};

// K(x, y) = |1 - <x, y>|^{-m (1 - alpha)}, applied through its modulus.
struct BergmanKernel {
  double m = 2.0;
};

// Explicit row-major n x n values with zero diagonal.
struct CustomMatrixKernel {
  std::vector<double> values;
};

enum class DiagonalConvention {
  kExclude,     // K(x, x) := 0
  kAtomRadius,  // K(x, x) := 1 / lambda(x, r_atom(x))^{1 - alpha}, r_atom = half the nearest-neighbor distance
  kNone,        // evaluating a singular kernel on the diagonal is an error
};

struct KernelSpec {
  double alpha = 0.5;
  std::variant<FracIntegralKernel, BergmanKernel, CustomMatrixKernel> kind{FracIntegralKernel{}};
  DiagonalConvention diagonal = DiagonalConvention::kExclude;
};

void validate_kernel(const KernelSpec& spec, const Space& space);

double eval_kernel(const KernelSpec& spec, const Space& space, std::size_t x, std::size_t y);

// Dense n x n kernel values, row x holds K(x, .).
std::vector<double> kernel_matrix(const KernelSpec& spec, const Space& space);

struct SizeFit {
  double c_size = 0.0;
  std::size_t witness_x = 0;
  std::size_t witness_y = 0;
};

struct SmoothRow {
  double delta = 0.0;
  double c_smooth = 0.0;
  std::size_t witness_x = 0, witness_xt = 0, witness_y = 0;
};

struct SmoothFit {
  bool empty = true;  // no admissible triples
  std::size_t triples = 0;
  bool sampled = false;
  double c_k = 2.0;   // separation factor
  SmoothRow best;
  std::vector<SmoothRow> table;
};

struct SmoothOptions {
  std::size_t triple_budget = 1000000;
  std::uint64_t seed = 7;
};

SizeFit check_size_condition(const KernelSpec& spec, const Space& space);
SmoothFit check_smoothness_condition(const KernelSpec& spec, const Space& space,
                                     const std::vector<double>& delta_grid,
                                     const SmoothOptions& opts = {});

KernelSpec kernel_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const KernelSpec& spec);
DiagonalConvention diagonal_from_string(const std::string& s);
const char* diagonal_name(DiagonalConvention d);

}  // namespace nhfrac
