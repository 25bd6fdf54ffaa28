#pragma once

// Independent reference solutions shared by the unit tests and the
// acceptance run.

#include <cmath>
#include <complex>
#include <numbers>

#include "wgtrap/bpm.hpp"
#include "wgtrap/modes.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline constexpr double kNref = 3.25;
inline constexpr double kLambda = 1.55;

inline double beta() { return 2 * std::numbers::pi / kLambda * kNref; }

// Exact solution of d psi/dz = -j/(2 beta) psi_xx for the launch
// exp(-(x-x0)^2 / (2 sigma^2)).
inline cplx gaussian(double x, double z, double x0, double sigma) {
  const cplx s2 = cplx(sigma * sigma, -z / beta());
  return std::sqrt(sigma * sigma / s2) * std::exp(-(x - x0) * (x - x0) / (2.0 * s2));
}

// 1/e intensity half-width of the same beam.
inline double gaussian_width(double z, double sigma) {
  return sigma * std::sqrt(1.0 + std::pow(z / (beta() * sigma * sigma), 2));
}

struct GaussRun {
  double rms_width;
  double l2_error;
};

// Uniform medium eps = n_ref^2, 100 um window, beam centred.
inline GaussRun gaussian_run(double dx, double dz, double sigma = 4.0, double L = 500.0) {
  using namespace wgtrap;
  const double W = 100.0, x0 = 50.0;
  LayoutSpec layout;
  layout.eps_substrate = kNref * kNref;
  layout.window_width = W;
  layout.length = L;
  const auto grid = Grid::fit(W, L, dx, dz);
  PropagationOptions o;
  o.wavelength_um = kLambda;
  o.n_ref = kNref;
  const auto r = propagate(layout, gaussian_launch(x0, sigma, grid), grid, o);
  double m0 = 0, m2 = 0, err = 0, norm = 0;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    const double p = std::norm(r.final_state.psi[i]);
    m0 += p;
    m2 += p * (x - x0) * (x - x0);
    const cplx e = gaussian(x, L, x0, sigma);
    err += std::norm(r.final_state.psi[i] - e);
    norm += std::norm(e);
  }
  // |psi|^2 ~ exp(-(x-x0)^2 / w^2) has second moment w^2 / 2
  return {std::sqrt(2.0 * m2 / m0), std::sqrt(err / norm)};
}

// Two-level coupler with constant kappa: P1 = cos^2(kappa z).
inline double rabi_p1(double kappa, double z) { return std::pow(std::cos(kappa * z), 2); }

}  // namespace oracle
