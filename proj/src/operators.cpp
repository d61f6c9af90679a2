#include "nhfrac/operators.hpp"

#include <cmath>
#include <functional>

#include "nhfrac/error.hpp"

namespace nhfrac {

void check_bound(const Space& space, const FunctionVec& f) {
  if (f.size() != space.size()) throw Error("function is not bound to the space (length mismatch)");
  for (double v : f)
    if (!std::isfinite(v)) throw Error("function has a non-finite entry");
}

KernelOperator::KernelOperator(const KernelSpec& spec, const Space& space)
    : spec_(spec), space_(&space), n_(space.size()), matrix_(kernel_matrix(spec, space)) {}

FunctionVec KernelOperator::apply(const FunctionVec& f) const {
  check_bound(*space_, f);
  std::vector<double> fw(n_);
  for (std::size_t y = 0; y < n_; ++y) fw[y] = f[y] * space_->weight(y);
  FunctionVec out(n_, 0.0);
  for (std::size_t x = 0; x < n_; ++x) {
    const double* row = matrix_.data() + x * n_;
    double s = 0.0;
    for (std::size_t y = 0; y < n_; ++y) s += row[y] * fw[y];
    out[x] = s;
  }
  return out;
}

FunctionVec apply_T(const KernelSpec& spec, const Space& space, const FunctionVec& f) {
  return KernelOperator(spec, space).apply(f);
}

FunctionVec apply_I_alpha(const Space& space, const FunctionVec& f, double alpha, DiagonalConvention diagonal) {
  KernelSpec spec;
  spec.alpha = alpha;
  spec.kind = FracIntegralKernel{};
  spec.diagonal = diagonal;
  return apply_T(spec, space, f);
}

FunctionVec commutator(const FunctionVec& b, const KernelOperator& op, const FunctionVec& f) {
  return multilinear_commutator({b}, op, f);
}

FunctionVec commutator(const FunctionVec& b, const KernelSpec& spec, const Space& space, const FunctionVec& f) {
  return commutator(b, KernelOperator(spec, space), f);
}

namespace {

// T^{(j)} g for the first j symbols.
FunctionVec nested(const std::vector<FunctionVec>& bs, std::size_t j, const KernelOperator& op,
                   const FunctionVec& g) {
  if (j == 0) return op.apply(g);
  const FunctionVec& b = bs[j - 1];
  FunctionVec bg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) bg[i] = b[i] * g[i];
  FunctionVec left = nested(bs, j - 1, op, g);
  const FunctionVec right = nested(bs, j - 1, op, bg);
  for (std::size_t i = 0; i < g.size(); ++i) left[i] = b[i] * left[i] - right[i];
  return left;
}

}  // namespace

FunctionVec multilinear_commutator(const std::vector<FunctionVec>& bs, const KernelOperator& op,
                                   const FunctionVec& f) {
  if (bs.empty()) throw Error("multilinear commutator needs at least one symbol");
  check_bound(op.space(), f);
  for (const auto& b : bs) check_bound(op.space(), b);
  return nested(bs, bs.size(), op, f);
}

FunctionVec multilinear_commutator(const std::vector<FunctionVec>& bs, const KernelSpec& spec,
                                   const Space& space, const FunctionVec& f) {
  return multilinear_commutator(bs, KernelOperator(spec, space), f);
}

std::vector<SigmaSubset> sigma_subsets(int k, int i) {
  if (k < 0 || i < 0 || i > k) throw Error("sigma_subsets: need 0 <= i <= k");
  std::vector<SigmaSubset> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(cur.size()) == i) {
      SigmaSubset s{k, cur, {}};
      std::size_t p = 0;
      for (int v = 1; v <= k; ++v) {
        if (p < cur.size() && cur[p] == v) {
          ++p;
        } else {
          s.complement.push_back(v);
        }
      }
      out.push_back(std::move(s));
      return;
    }
    for (int v = next; v <= k; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

FunctionVec expansion_rhs(const std::vector<FunctionVec>& bs, const KernelOperator& op, const FunctionVec& f,
                          const std::vector<double>& means, FullSubsetTerm full) {
  const int k = static_cast<int>(bs.size());
  if (k == 0) throw Error("expansion_rhs needs at least one symbol");
  if (means.size() != bs.size()) throw Error("expansion_rhs: one mean per symbol required");
  const std::size_t n = f.size();
  check_bound(op.space(), f);

  FunctionVec g = f;
  for (int i = 0; i < k; ++i)
    for (std::size_t y = 0; y < n; ++y) g[y] *= means[i] - bs[i][y];
  FunctionVec out = op.apply(g);

  for (int i = 1; i <= k; ++i) {
    for (const auto& sigma : sigma_subsets(k, i)) {
      FunctionVec inner;
      if (sigma.complement.empty()) {
        if (full == FullSubsetTerm::kAbsolute) {
          FunctionVec af(n);
          for (std::size_t y = 0; y < n; ++y) af[y] = std::abs(f[y]);
          inner = op.apply(af);
        } else {
          inner = op.apply(f);
        }
      } else {
        std::vector<FunctionVec> sub;
        for (int c : sigma.complement) sub.push_back(bs[c - 1]);
        inner = multilinear_commutator(sub, op, f);
      }
      for (std::size_t y = 0; y < n; ++y) {
        double coef = 1.0;
        for (int s : sigma.indices) coef *= means[s - 1] - bs[s - 1][y];
        out[y] -= coef * inner[y];
      }
    }
  }
  return out;
}

}  // namespace nhfrac
