#pragma once

#include <vector>

#include "wgtrap/geometry.hpp"

namespace wgtrap {

struct Grid;

// Fundamental even TE mode of a symmetric slab.
struct SlabMode {
  double wavelength = 0.0; // um
  double n_eff = 0.0;
  double beta = 0.0;       // rad/um, = k0 * n_eff
  double width = 0.0;      // um
  double n_core = 0.0;
  double n_clad = 0.0;
  double h = 0.0;          // transverse wavenumber in the core, 1/um
  double q = 0.0;          // cladding decay constant, 1/um

  // Field at a transverse offset from the guide centre, peak 1.
  double profile(double offset_um) const;
  // Fraction of the mode power inside the core.
  double confinement() const;
  // tan(h t/2) - q/h at the stored n_eff.
  double dispersion_residual() const;
};

SlabMode solve_te0(double n_core, double n_clad, double width_um, double wavelength_um);

// exp(-(x - x0)^2 / (2 waist^2)) on the grid, peak 1.
std::vector<cplx> gaussian_launch(double x0_um, double waist_um, const Grid& grid);

std::vector<cplx> mode_launch(const SlabMode& mode, double x0_um, const Grid& grid);

}  // namespace wgtrap
