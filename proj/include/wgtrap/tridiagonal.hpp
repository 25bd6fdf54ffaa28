#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wgtrap {

// Thomas algorithm for a complex tridiagonal system. lower[0] and
// upper[n-1] are ignored. No pivoting: callers supply matrices whose
// Hermitian part is positive definite (true for every CN step here).
class TridiagonalSolver {
 public:
  using cplx = std::complex<double>;

  explicit TridiagonalSolver(std::size_t n = 0) : scratch_(n) {}

  void solve(std::span<const cplx> lower, std::span<const cplx> diag, std::span<const cplx> upper,
             std::span<const cplx> rhs, std::span<cplx> x);

 private:
  std::vector<cplx> scratch_;
};

}  // namespace wgtrap
