#pragma once

#include <complex>
#include <span>
#include <string_view>

// Inner loops of the Crank-Nicolson step. Each has a scalar reference and,
// on x86-64, an AVX2 variant chosen at runtime. Elementwise kernels are
// bit-identical across backends; reductions agree to rounding.
namespace wgtrap::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

bool avx2_supported();
Backend active_backend();
// Throws std::invalid_argument when the CPU lacks the requested backend.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend);

// out_i = scale * (eps_i - n_ref_sq)
void potential(std::span<const cplx> eps, double n_ref_sq, double scale, std::span<cplx> out);

// out = psi - j*half_dz*(lap_coef*D2 psi + v*psi), where D2 is the three-point
// second difference with mirrored ghost points (Neumann). Needs size >= 3.
void cn_rhs(std::span<const cplx> psi, std::span<const cplx> v, double half_dz, double lap_coef,
            std::span<cplx> out);

// diag_i = 1 + j*half_dz*(v_i - 2*lap_coef)
void cn_diagonal(std::span<const cplx> v, double half_dz, double lap_coef, std::span<cplx> diag);

// out_i = |psi_i|^2
void intensity(std::span<const cplx> psi, std::span<double> out);

// sum_i |psi_i|^2
double sum_intensity(std::span<const cplx> psi);

}  // namespace wgtrap::kernels
