#include "wgtrap/modes.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wgtrap/bpm.hpp"
#include "wgtrap/errors.hpp"

namespace wgtrap {

namespace {

constexpr int kBracketIntervals = 4096;

struct Transverse {
  double h;
  double q;
};

Transverse transverse(double k0, double n_core, double n_clad, double n) {
  return {k0 * std::sqrt(std::max(0.0, n_core * n_core - n * n)),
          k0 * std::sqrt(std::max(0.0, n * n - n_clad * n_clad))};
}

// h sin(h t/2) - q cos(h t/2): same roots as tan(h t/2) - q/h but pole free.
double bracket_residual(double k0, double n_core, double n_clad, double width, double n) {
  const auto [h, q] = transverse(k0, n_core, n_clad, n);
  const double arg = h * width / 2.0;
  return h * std::sin(arg) - q * std::cos(arg);
}

}  // namespace

double SlabMode::profile(double offset_um) const {
  const double d = std::abs(offset_um);
  if (d <= width / 2.0) return std::cos(h * d);
  return std::cos(h * width / 2.0) * std::exp(-q * (d - width / 2.0));
}

double SlabMode::confinement() const {
  const double c = std::cos(h * width / 2.0);
  const double inside = width / 2.0 + std::sin(h * width) / (2.0 * h);
  const double outside = c * c / q;
  return inside / (inside + outside);
}

double SlabMode::dispersion_residual() const { return std::tan(h * width / 2.0) - q / h; }

SlabMode solve_te0(double n_core, double n_clad, double width_um, double wavelength_um) {
  if (!(n_clad > 0.0) || !(n_core > n_clad))
    throw DomainError(fmt::format("need n_core > n_clad > 0 (got {}, {})", n_core, n_clad));
  if (!(width_um > 0.0) || !(wavelength_um > 0.0))
    throw DomainError(fmt::format("width and wavelength must be positive (got {}, {})", width_um, wavelength_um));

  const double k0 = 2.0 * std::numbers::pi / wavelength_um;
  auto residual = [&](double n) { return bracket_residual(k0, n_core, n_clad, width_um, n); };

  // Scan down from n_core: the first sign change is the fundamental.
  const double span = n_core - n_clad;
  double hi = n_core;
  double f_hi = residual(hi);
  double lo = hi;
  bool found = false;
  for (int k = kBracketIntervals - 1; k >= 0; --k) {
    lo = n_clad + span * static_cast<double>(k) / kBracketIntervals;
    const double f_lo = residual(lo);
    if ((f_lo > 0.0) != (f_hi > 0.0) || f_lo == 0.0) {
      found = true;
      break;
    }
    hi = lo;
    f_hi = f_lo;
  }
  if (!found) throw DomainError("no TE0 root bracketed");

  // Bisection down to adjacent doubles.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = residual(mid);
    if ((f_mid > 0.0) == (f_hi > 0.0)) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
    }
  }
  const double n_eff = 0.5 * (lo + hi);
  const auto [h, q] = transverse(k0, n_core, n_clad, n_eff);
  return SlabMode{wavelength_um, n_eff, k0 * n_eff, width_um, n_core, n_clad, h, q};
}

std::vector<cplx> gaussian_launch(double x0_um, double waist_um, const Grid& grid) {
  if (!(waist_um > 0.0)) throw DomainError("launch waist must be positive");
  std::vector<cplx> field(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double d = grid.x(i) - x0_um;
    field[i] = std::exp(-d * d / (2.0 * waist_um * waist_um));
  }
  return field;
}

std::vector<cplx> mode_launch(const SlabMode& mode, double x0_um, const Grid& grid) {
  std::vector<cplx> field(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) field[i] = mode.profile(grid.x(i) - x0_um);
  return field;
}

}  // namespace wgtrap
