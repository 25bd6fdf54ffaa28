#include "wgtrap/tridiagonal.hpp"

#include <stdexcept>

namespace wgtrap {

void TridiagonalSolver::solve(std::span<const cplx> lower, std::span<const cplx> diag,
                              std::span<const cplx> upper, std::span<const cplx> rhs,
                              std::span<cplx> x) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n || x.size() != n)
    throw std::invalid_argument("tridiagonal solve: size mismatch");
  if (n == 0) return;
  if (scratch_.size() != n) scratch_.assign(n, cplx{});

  // Forward elimination; x holds the modified right-hand side.
  cplx m = diag[0];
  scratch_[0] = upper[0] / m;
  x[0] = rhs[0] / m;
  for (std::size_t i = 1; i < n; ++i) {
    m = diag[i] - lower[i] * scratch_[i - 1];
    scratch_[i] = upper[i] / m;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / m;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch_[i] * x[i + 1];
}

}  // namespace wgtrap
