// Scalar reference kernels. Complex arithmetic is spelled out on real and
// imaginary parts so the operation order matches the AVX2 variant exactly.

#include "kernels_impl.hpp"

namespace wgtrap::kernels::scalar {

namespace {

inline cplx rhs_point(cplx pm, cplx p, cplx pp, cplx v, double a, double c) {
  const double lr = (pm.real() + pp.real()) - 2.0 * p.real();
  const double li = (pm.imag() + pp.imag()) - 2.0 * p.imag();
  const double mr = v.real() * p.real() - v.imag() * p.imag();
  const double mi = v.real() * p.imag() + v.imag() * p.real();
  const double sr = c * lr + mr;
  const double si = c * li + mi;
  return {p.real() + a * si, p.imag() + -(a * sr)};
}

}  // namespace

void potential(const cplx* eps, std::size_t n, double n_ref_sq, double scale, cplx* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = {scale * (eps[i].real() - n_ref_sq), scale * (eps[i].imag() - 0.0)};
}

void cn_rhs(const cplx* psi, const cplx* v, std::size_t n, double half_dz, double lap_coef,
            cplx* out) {
  out[0] = rhs_point(psi[1], psi[0], psi[1], v[0], half_dz, lap_coef);
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = rhs_point(psi[i - 1], psi[i], psi[i + 1], v[i], half_dz, lap_coef);
  out[n - 1] = rhs_point(psi[n - 2], psi[n - 1], psi[n - 2], v[n - 1], half_dz, lap_coef);
}

void cn_diagonal(const cplx* v, std::size_t n, double half_dz, double lap_coef, cplx* diag) {
  const double two_c = 2.0 * lap_coef;
  for (std::size_t i = 0; i < n; ++i)
    diag[i] = {1.0 - half_dz * v[i].imag(), half_dz * (v[i].real() - two_c)};
}

void intensity(const cplx* psi, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
}

double sum_intensity(const cplx* psi, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
  return acc;
}

}  // namespace wgtrap::kernels::scalar
