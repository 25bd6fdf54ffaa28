#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wgtrap/geometry.hpp"

namespace wgtrap {

// Uniform transverse/longitudinal sampling. x_i = i*dx for i < nx spans the
// closed window [0, W]; the march takes nz steps of dz to cover L.
struct Grid {
  double dx = 0.0;
  double dz = 0.0;
  std::size_t nx = 0;
  std::size_t nz = 0;
  double window_width = 0.0;
  double length = 0.0;

  // Picks nx, nz nearest to the targets and adjusts dx, dz so the window
  // and length are covered exactly.
  static Grid fit(double window_width, double length, double dx_target, double dz_target);
  static Grid for_layout(const LayoutSpec& layout, double dx_target, double dz_target) {
    return fit(layout.window_width, layout.length, dx_target, dz_target);
  }

  double x(std::size_t i) const { return dx * static_cast<double>(i); }
  std::vector<InvariantCheck> check() const;
  void validate() const;
  bool operator==(const Grid&) const = default;
};

enum class Direction { forward, backward };

enum class Side { left, right };

// Named access point: P_L1/P_R1 sit on D1, P_L2/P_R2 on D2.
struct Port {
  std::string name;
  std::size_t waveguide = 0;
  Side side = Side::left;
  bool operator==(const Port&) const = default;
};

Port parse_port(std::string_view name);
double port_position(const LayoutSpec& layout, const Port& port);
inline Direction port_direction(const Port& port) {
  return port.side == Side::left ? Direction::forward : Direction::backward;
}

struct PropagationOptions {
  double wavelength_um = 1.55;
  Direction direction = Direction::forward;
  std::optional<double> n_ref;   // TE0 index of isolated D1 when unset
  std::size_t snapshot_every = 0;  // 0 disables field snapshots
};

struct FieldState {
  std::vector<cplx> psi;
  double z_um = 0.0;
  Direction direction = Direction::forward;
};

// Per-step monitors, nz + 1 samples including the launch plane. Index k is
// travel distance k*dz; z_um[k] is the physical z (decreasing when
// propagating backward).
struct MonitorTrace {
  std::vector<double> z_um;
  std::vector<std::vector<double>> point_intensity;  // [waveguide][k], |psi| at the centre
  std::vector<std::vector<double>> core_power;       // [waveguide][k], integrated over the core
  std::vector<double> total_power;                   // trapezoid-weighted norm
  std::size_t samples() const { return z_um.size(); }
};

struct FieldSnapshot {
  std::size_t step = 0;
  double z_um = 0.0;
  std::vector<cplx> psi;
};

struct PropagationResult {
  MonitorTrace trace;
  FieldState final_state;
  double n_ref = 0.0;
  double wavelength_um = 0.0;
  double launch_power = 0.0;
  std::vector<FieldSnapshot> snapshots;
};

double reference_index(const LayoutSpec& layout, double wavelength_um);

double weighted_power(std::span<const cplx> psi, double dx);
double core_power(std::span<const cplx> psi, const Grid& grid, double center_um, double width_um);

PropagationResult propagate(const LayoutSpec& layout, std::span<const cplx> launch, const Grid& grid,
                            const PropagationOptions& options);

// Same as propagate with direction forced to backward: launch sits at z = L.
PropagationResult propagate_backward(const LayoutSpec& layout, std::span<const cplx> launch,
                                     const Grid& grid, PropagationOptions options);

struct Transmission {
  std::vector<double> port_fraction;  // exit core power / launch power, per waveguide
  double total_fraction = 0.0;
  double substrate_fraction = 0.0;
  double contrast_db = 0.0;           // D1 vs D2 centre intensity at the exit
  double exit_z_um = 0.0;
};

Transmission transmission(const PropagationResult& result, const LayoutSpec& layout, const Grid& grid);

// Exponential fit of the total-power trace of an isolated lossy guide.
// power_rate is -d ln P/dz (the value comparable to the CME gamma);
// amplitude_rate is half of it.
struct DecayFit {
  double power_rate_per_mm = 0.0;
  double amplitude_rate_per_mm = 0.0;
  double max_relative_residual = 0.0;
};

inline constexpr double kFitTailFraction = 0.8;
inline constexpr double kFitMaxOscillation = 0.05;

DecayFit extract_gamma(const MonitorTrace& trace);

struct IsolatedGuide {
  double width_um = 4.0;
  cplx eps_core{10.76, -0.01};
  double eps_substrate = 10.56;
  double wavelength_um = 1.55;
  double length_um = 500.0;
  double window_um = 60.0;
  double dx = 0.1;
  double dz = 1.0;
};

// Mode-launched straight guide centred in its window, propagated and fitted.
DecayFit measure_isolated_decay(const IsolatedGuide& guide);

}  // namespace wgtrap
