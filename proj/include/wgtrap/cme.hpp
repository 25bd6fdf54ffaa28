#pragma once

#include <algorithm>
#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "wgtrap/geometry.hpp"

namespace wgtrap {

struct Grid;
struct MonitorTrace;
struct Preset;

// Three-mode coupled amplitude model. Rates in 1/mm, lengths in mm.
struct CmeParams {
  double delta13 = 0.0;
  double delta23 = 0.0;
  double gamma = 0.0;  // amplitude damping of mode 3
  CouplingSchedule kappa13;
  CouplingSchedule kappa23;
  double length = 0.0;
};

struct CmeState {
  cplx a1, a2, a3;
  double z = 0.0;  // mm
  double p1() const { return std::norm(a1); }
  double p2() const { return std::norm(a2); }
  double p3() const { return std::norm(a3); }
  double total() const { return p1() + p2() + p3(); }
};

struct CmeTrace {
  std::vector<double> z_mm;
  std::vector<double> p1, p2, p3;
  CmeState final_state;
};

inline constexpr double kCmeStepGuard = 0.1;
inline constexpr double kCmeDefaultDz = 2.5e-4;  // mm

// Classic RK4 from initial.z to params.length. dz is shrunk so the span is
// an integer number of steps; every step is recorded.
CmeTrace integrate(const CmeParams& params, const CmeState& initial, double dz = kCmeDefaultDz);

// Overlap-integral coupling of mode n into mode m at z, in 1/mm. Complex
// because delta-eps includes the lossy core. Uses isolated TE0 profiles of
// each guide (real part of its permittivity) and trapezoid quadrature on
// the transverse grid.
cplx coupling_coefficient(const LayoutSpec& layout, std::size_t m, std::size_t n, double z_um,
                          double wavelength_um, const Grid& grid);

// Propagation-constant difference beta_a - beta_b of two isolated guides, 1/mm.
double detuning_per_mm(double width_a_um, double width_b_um, double n_core, double n_clad,
                       double wavelength_um);

// kappa >= 0, continuous joins, and coverage of [0, length].
std::vector<InvariantCheck> check_schedules(const CmeParams& params);

// CME vs BPM centre-intensity traces. Each engine's three series are divided
// by that engine's peak value; deviation is the largest absolute difference
// over the BPM z samples (CME interpolated linearly).
struct TraceDeviation {
  std::array<double, 3> max_abs{};
  double worst() const { return std::max({max_abs[0], max_abs[1], max_abs[2]}); }
};
TraceDeviation compare_traces(const MonitorTrace& bpm, const CmeTrace& cme);

std::pair<CouplingSchedule, CouplingSchedule> paper_fit_schedules(std::string_view preset_id);
CmeParams cme_params_from_preset(const Preset& preset);

}  // namespace wgtrap
