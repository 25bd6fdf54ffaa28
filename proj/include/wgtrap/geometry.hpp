#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "wgtrap/piecewise.hpp"

namespace wgtrap {

using cplx = std::complex<double>;

struct WaveguideSpec {
  std::string name;
  Trajectory center;  // um vs z in um
  double width = 0.0; // um
  cplx eps_core;      // relative permittivity, Im <= 0 is loss
  bool operator==(const WaveguideSpec&) const = default;
};

// Planar layout in a W x L window. By convention waveguides[0] is D1,
// waveguides[1] is D2 and waveguides[2] is the lossy middle guide D3.
struct LayoutSpec {
  double eps_substrate = 1.0;
  double window_width = 0.0; // um
  double length = 0.0;       // um
  std::vector<WaveguideSpec> waveguides;
  bool operator==(const LayoutSpec&) const = default;
};

inline constexpr std::size_t kD1 = 0;
inline constexpr std::size_t kD2 = 1;
inline constexpr std::size_t kD3 = 2;

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

double center_at(const Trajectory& trajectory, double z_um);

// Pointwise permittivity. Core intervals are half-open [c - w/2, c + w/2).
cplx epsilon_at(const LayoutSpec& layout, double x_um, double z_um);

// Permittivity on the uniform grid x_i = i*dx, averaged over each cell
// [x_i - dx/2, x_i + dx/2]. Writes out.size() samples.
void permittivity_row(const LayoutSpec& layout, double z_um, double dx, std::span<cplx> out);

// z stretched by eta_z, D1/D2 widths times eta_t, D1 centre +g and D2
// centre -g. Result is validated; throws ValidationError on failure.
LayoutSpec scale_layout(const LayoutSpec& layout, double eta_z, double eta_t, double gap_shift);

std::vector<InvariantCheck> check_layout(const LayoutSpec& layout);
void validate_layout(const LayoutSpec& layout);

}  // namespace wgtrap
