#pragma once

#include <cstddef>

#include "wgtrap/kernels.hpp"

// Backend entry points on raw pointers. Sizes are validated by the
// dispatcher before either variant is called.
namespace wgtrap::kernels {

#define WGTRAP_KERNEL_DECLS                                                                 \
  void potential(const cplx* eps, std::size_t n, double n_ref_sq, double scale, cplx* out); \
  void cn_rhs(const cplx* psi, const cplx* v, std::size_t n, double half_dz,                \
              double lap_coef, cplx* out);                                                  \
  void cn_diagonal(const cplx* v, std::size_t n, double half_dz, double lap_coef,           \
                   cplx* diag);                                                             \
  void intensity(const cplx* psi, std::size_t n, double* out);                              \
  double sum_intensity(const cplx* psi, std::size_t n);

namespace scalar {
WGTRAP_KERNEL_DECLS
}
namespace avx2 {
WGTRAP_KERNEL_DECLS
}

#undef WGTRAP_KERNEL_DECLS

}  // namespace wgtrap::kernels
