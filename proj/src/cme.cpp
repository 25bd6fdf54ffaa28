#include "wgtrap/cme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wgtrap/bpm.hpp"
#include "wgtrap/errors.hpp"
#include "wgtrap/modes.hpp"
#include "wgtrap/preset.hpp"

namespace wgtrap {

namespace {

using Amps = std::array<cplx, 3>;

double schedule_at(const CouplingSchedule& s, double z) {
  return s(std::clamp(z, s.z_begin(), s.z_end()));
}

Amps rhs(const CmeParams& p, double z, const Amps& a) {
  constexpr cplx j{0.0, 1.0};
  const double k13 = schedule_at(p.kappa13, z);
  const double k23 = schedule_at(p.kappa23, z);
  return {j * p.delta13 * a[0] + j * k13 * a[2],
          j * p.delta23 * a[1] + j * k23 * a[2],
          j * k13 * a[0] + j * k23 * a[1] - p.gamma * a[2]};
}

Amps axpy(const Amps& a, double h, const Amps& k) {
  return {a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2]};
}

}  // namespace

CmeTrace integrate(const CmeParams& params, const CmeState& initial, double dz) {
  if (!(params.length > 0.0)) throw ConfigError("cme length must be positive");
  if (!(params.gamma >= 0.0)) throw ConfigError("cme gamma must be non-negative");
  if (!(dz > 0.0)) throw ConfigError("cme step must be positive");
  const double span = params.length - initial.z;
  if (!(span > 0.0)) throw ConfigError(fmt::format("start z = {} mm is not before L = {} mm", initial.z, params.length));
  for (const auto* s : {&params.kappa13, &params.kappa23})
    if (s->z_begin() > initial.z + 1e-12 || s->z_end() < params.length - 1e-12)
      throw ConfigError(fmt::format("coupling schedule [{}, {}] mm does not cover [{}, {}] mm", s->z_begin(),
                                    s->z_end(), initial.z, params.length));

  const auto n = static_cast<std::size_t>(std::max(1.0, std::round(span / dz)));
  const double h = span / static_cast<double>(n);

  const auto [k13_lo, k13_hi] = params.kappa13.range();
  const auto [k23_lo, k23_hi] = params.kappa23.range();
  const double fastest = std::max({std::abs(k13_lo), std::abs(k13_hi), std::abs(k23_lo), std::abs(k23_hi),
                                   std::abs(params.delta13), std::abs(params.delta23), params.gamma});
  if (h * fastest >= kCmeStepGuard)
    throw ConfigError(fmt::format("cme step {} mm too coarse: dz * max rate = {:.3g} (limit {})", h, h * fastest,
                                  kCmeStepGuard));

  CmeTrace trace;
  trace.z_mm.reserve(n + 1);
  trace.p1.reserve(n + 1);
  trace.p2.reserve(n + 1);
  trace.p3.reserve(n + 1);

  Amps a{initial.a1, initial.a2, initial.a3};
  auto record = [&](double z) {
    trace.z_mm.push_back(z);
    trace.p1.push_back(std::norm(a[0]));
    trace.p2.push_back(std::norm(a[1]));
    trace.p3.push_back(std::norm(a[2]));
  };
  record(initial.z);
  for (std::size_t k = 0; k < n; ++k) {
    const double z = initial.z + static_cast<double>(k) * h;
    const auto k1 = rhs(params, z, a);
    const auto k2 = rhs(params, z + h / 2, axpy(a, h / 2, k1));
    const auto k3 = rhs(params, z + h / 2, axpy(a, h / 2, k2));
    const auto k4 = rhs(params, z + h, axpy(a, h, k3));
    for (std::size_t i = 0; i < 3; ++i) a[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    record(initial.z + static_cast<double>(k + 1) * h);
  }
  trace.final_state = {a[0], a[1], a[2], trace.z_mm.back()};
  return trace;
}

cplx coupling_coefficient(const LayoutSpec& layout, std::size_t m, std::size_t n, double z_um,
                          double wavelength_um, const Grid& grid) {
  if (m >= layout.waveguides.size() || n >= layout.waveguides.size())
    throw DomainError(fmt::format("waveguide index out of range ({}, {})", m, n));
  if (std::abs(grid.dx * static_cast<double>(grid.nx - 1) - layout.window_width) > 1e-9 || grid.nx < 3)
    throw DomainError("coupling grid does not span the layout window");
  if (z_um < 0.0 || z_um > layout.length) throw DomainError(fmt::format("z = {} um outside the layout", z_um));

  const double n_clad = std::sqrt(layout.eps_substrate);
  const auto& gm = layout.waveguides[m];
  const auto& gn = layout.waveguides[n];
  const auto mode_m = solve_te0(std::sqrt(gm.eps_core.real()), n_clad, gm.width, wavelength_um);
  const auto mode_n = solve_te0(std::sqrt(gn.eps_core.real()), n_clad, gn.width, wavelength_um);
  const double cm = gm.center(z_um);
  const double cn = gn.center(z_um);
  const double k0 = 2.0 * std::numbers::pi / wavelength_um;

  cplx num{};
  double den = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    const double w = (i == 0 || i + 1 == grid.nx) ? 0.5 : 1.0;
    const double em = mode_m.profile(x - cm);
    const double en = mode_n.profile(x - cn);
    const bool in_n = x >= cn - gn.width / 2.0 && x < cn + gn.width / 2.0;
    const cplx eps_n = in_n ? gn.eps_core : cplx{layout.eps_substrate, 0.0};
    num += w * (epsilon_at(layout, x, z_um) - eps_n) * em * en;
    den += w * em * em;
  }
  // per um -> per mm
  return 1000.0 * k0 * k0 * num / (mode_m.beta * den);
}

double detuning_per_mm(double width_a_um, double width_b_um, double n_core, double n_clad, double wavelength_um) {
  const auto a = solve_te0(n_core, n_clad, width_a_um, wavelength_um);
  const auto b = solve_te0(n_core, n_clad, width_b_um, wavelength_um);
  return 1000.0 * (a.beta - b.beta);
}

std::vector<InvariantCheck> check_schedules(const CmeParams& params) {
  std::vector<InvariantCheck> out;
  out.push_back({"cme.length_positive", params.length > 0.0, fmt::format("L = {} mm", params.length)});
  out.push_back({"cme.gamma_nonnegative", params.gamma >= 0.0, fmt::format("gamma = {} /mm", params.gamma)});
  for (const auto& [name, s] : {std::pair{"kappa13", &params.kappa13}, std::pair{"kappa23", &params.kappa23}}) {
    const auto [lo, hi] = s->range();
    out.push_back({fmt::format("cme.{}.nonnegative", name), lo >= 0.0, fmt::format("min = {}", lo)});
    out.push_back({fmt::format("cme.{}.continuous", name), s->max_join_jump() <= 1e-9 && s->max_gap() <= 1e-9,
                   fmt::format("join jump {:.3g}, gap {:.3g}", s->max_join_jump(), s->max_gap())});
    out.push_back({fmt::format("cme.{}.covers_length", name),
                   s->z_begin() <= 1e-12 && s->z_end() >= params.length - 1e-12,
                   fmt::format("[{}, {}] mm vs L = {} mm", s->z_begin(), s->z_end(), params.length)});
  }
  return out;
}

TraceDeviation compare_traces(const MonitorTrace& bpm, const CmeTrace& cme) {
  if (bpm.point_intensity.size() < 3) throw DomainError("BPM trace needs three waveguide monitors");
  if (cme.z_mm.size() < 2) throw DomainError("CME trace too short");
  const std::array<const std::vector<double>*, 3> c{&cme.p1, &cme.p2, &cme.p3};
  auto peak = [](const std::array<const std::vector<double>*, 3>& series) {
    double m = 0.0;
    for (const auto* v : series) m = std::max(m, *std::max_element(v->begin(), v->end()));
    return m > 0.0 ? m : 1.0;
  };
  const double pb = peak({&bpm.point_intensity[0], &bpm.point_intensity[1], &bpm.point_intensity[2]});
  const double pc = peak(c);
  const double z0 = cme.z_mm.front();
  const double h = (cme.z_mm.back() - z0) / static_cast<double>(cme.z_mm.size() - 1);
  TraceDeviation dev;
  for (std::size_t w = 0; w < 3; ++w) {
    const auto& b = bpm.point_intensity[w];
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double s = std::clamp((bpm.z_um[k] / 1000.0 - z0) / h, 0.0, static_cast<double>(cme.z_mm.size() - 1));
      const auto i = std::min(static_cast<std::size_t>(s), cme.z_mm.size() - 2);
      const double t = s - static_cast<double>(i);
      const double cv = (1.0 - t) * (*c[w])[i] + t * (*c[w])[i + 1];
      dev.max_abs[w] = std::max(dev.max_abs[w], std::abs(b[k] / pb - cv / pc));
    }
  }
  return dev;
}

std::pair<CouplingSchedule, CouplingSchedule> paper_fit_schedules(std::string_view preset_id) {
  const auto preset = load_preset(preset_id);
  if (!preset.cme) throw LookupError(fmt::format("preset '{}' has no fitted coupling schedules", preset_id));
  return {preset.cme->kappa13, preset.cme->kappa23};
}

CmeParams cme_params_from_preset(const Preset& preset) {
  if (!preset.cme) throw LookupError(fmt::format("preset '{}' has no cme section", preset.id));
  CmeParams p;
  p.delta13 = preset.cme->delta13;
  p.delta23 = preset.cme->delta23;
  p.gamma = preset.cme->gamma;
  p.kappa13 = preset.cme->kappa13;
  p.kappa23 = preset.cme->kappa23;
  p.length = preset.layout.length / 1000.0;
  return p;
}

}  // namespace wgtrap
