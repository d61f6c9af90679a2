#pragma once

#include <cstddef>
#include <vector>

#include "nhfrac/kernels.hpp"
#include "nhfrac/space.hpp"

namespace nhfrac {

// One real value per point of a space.
using FunctionVec = std::vector<double>;

void check_bound(const Space& space, const FunctionVec& f);

// T f(x) = sum_y K(x, y) f(y) w_y with the kernel matrix precomputed once.
class KernelOperator {
 public:
  KernelOperator(const KernelSpec& spec, const Space& space);

  FunctionVec apply(const FunctionVec& f) const;
  const Space& space() const { return *space_; }
  const KernelSpec& spec() const { return spec_; }
  double k(std::size_t x, std::size_t y) const { return matrix_[x * n_ + y]; }

 private:
  KernelSpec spec_;
  const Space* space_;
  std::size_t n_;
  std::vector<double> matrix_;
};

FunctionVec apply_T(const KernelSpec& spec, const Space& space, const FunctionVec& f);
FunctionVec apply_I_alpha(const Space& space, const FunctionVec& f, double alpha,
                          DiagonalConvention diagonal = DiagonalConvention::kExclude);

// b T f - T(b f)
FunctionVec commutator(const FunctionVec& b, const KernelOperator& op, const FunctionVec& f);
FunctionVec commutator(const FunctionVec& b, const KernelSpec& spec, const Space& space, const FunctionVec& f);

// [b_k, ..., [b_1, T] ...] f, with b_1 innermost.
FunctionVec multilinear_commutator(const std::vector<FunctionVec>& bs, const KernelOperator& op,
                                   const FunctionVec& f);
FunctionVec multilinear_commutator(const std::vector<FunctionVec>& bs, const KernelSpec& spec,
                                   const Space& space, const FunctionVec& f);

// Subset of {1..k} (1-based) with its complement.
struct SigmaSubset {
  int k = 0;
  std::vector<int> indices;
  std::vector<int> complement;
};

std::vector<SigmaSubset> sigma_subsets(int k, int i);

// What the full subset (i = k, empty complement) contributes in expansion_rhs.
enum class FullSubsetTerm {
  kSigned,    // T f: the term the product expansion actually produces
  kAbsolute,  // T |f|
};

// T(prod_i (m_i - b_i) f)(y) - sum_{i>=1} sum_{sigma in C_i^k} [m - b(y)]_sigma T_{b_{sigma'}} f(y)
FunctionVec expansion_rhs(const std::vector<FunctionVec>& bs, const KernelOperator& op, const FunctionVec& f,
                          const std::vector<double>& means, FullSubsetTerm full = FullSubsetTerm::kSigned);

}  // namespace nhfrac
