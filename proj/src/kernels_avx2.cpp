// AVX2 kernels. Built with -mavx2 only (no FMA) so every elementwise result
// rounds exactly like the scalar reference. One __m256d holds two complex
// samples laid out [re0, im0, re1, im1].

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace wgtrap::kernels::avx2 {

namespace {

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (re, im) * (re, im) for two packed complex pairs, scalar operation order.
inline __m256d cmul(__m256d v, __m256d p) {
  const __m256d vr = _mm256_movedup_pd(v);
  const __m256d vi = _mm256_permute_pd(v, 0xF);
  const __m256d p_swap = _mm256_permute_pd(p, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(vr, p), _mm256_mul_pd(vi, p_swap));
}

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
  const __m256d shift = _mm256_setr_pd(n_ref_sq, 0.0, n_ref_sq, 0.0);
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out + i, _mm256_mul_pd(s, _mm256_sub_pd(load2(eps + i), shift)));
  for (; i < n; ++i) out[i] = {scale * (eps[i].real() - n_ref_sq), scale * (eps[i].imag() - 0.0)};
}

void cn_rhs(const cplx* psi, const cplx* v, std::size_t n, double half_dz, double lap_coef,
            cplx* out) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d a = _mm256_set1_pd(half_dz);
  const __m256d c = _mm256_set1_pd(lap_coef);
  const __m256d negate_im = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);

  out[0] = rhs_point(psi[1], psi[0], psi[1], v[0], half_dz, lap_coef);
  std::size_t i = 1;
  for (; i + 2 < n; i += 2) {
    const __m256d pm = load2(psi + i - 1);
    const __m256d p = load2(psi + i);
    const __m256d pp = load2(psi + i + 1);
    const __m256d lap = _mm256_sub_pd(_mm256_add_pd(pm, pp), _mm256_mul_pd(two, p));
    const __m256d s = _mm256_add_pd(_mm256_mul_pd(c, lap), cmul(load2(v + i), p));
    const __m256d as = _mm256_xor_pd(_mm256_mul_pd(a, _mm256_permute_pd(s, 0x5)), negate_im);
    store2(out + i, _mm256_add_pd(p, as));
  }
  for (; i + 1 < n; ++i) out[i] = rhs_point(psi[i - 1], psi[i], psi[i + 1], v[i], half_dz, lap_coef);
  out[n - 1] = rhs_point(psi[n - 2], psi[n - 1], psi[n - 2], v[n - 1], half_dz, lap_coef);
}

void cn_diagonal(const cplx* v, std::size_t n, double half_dz, double lap_coef, cplx* diag) {
  const double two_c = 2.0 * lap_coef;
  const __m256d shift = _mm256_setr_pd(two_c, 0.0, two_c, 0.0);
  const __m256d a = _mm256_set1_pd(half_dz);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // [a*vi, a*(vr - 2c)] then real lane becomes 1 - a*vi
    const __m256d t = _mm256_permute_pd(_mm256_mul_pd(a, _mm256_sub_pd(load2(v + i), shift)), 0x5);
    store2(diag + i, _mm256_blend_pd(_mm256_sub_pd(one, t), t, 0b1010));
  }
  for (; i < n; ++i) diag[i] = {1.0 - half_dz * v[i].imag(), half_dz * (v[i].real() - two_c)};
}

void intensity(const cplx* psi, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lo = load2(psi + i);
    const __m256d hi = load2(psi + i + 2);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(lo, lo), _mm256_mul_pd(hi, hi));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
  }
  for (; i < n; ++i) out[i] = psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
}

double sum_intensity(const cplx* psi, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d lo = load2(psi + i);
    const __m256d hi = load2(psi + i + 2);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(lo, lo));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(hi, hi));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
  return acc;
}

}  // namespace wgtrap::kernels::avx2
