#include "wgtrap/bpm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wgtrap/errors.hpp"
#include "wgtrap/kernels.hpp"
#include "wgtrap/modes.hpp"
#include "wgtrap/tridiagonal.hpp"

namespace wgtrap {

namespace {

constexpr double kGridTolerance = 1e-9;

// Length of sample i's cell [x - dx/2, x + dx/2], clipped to the window,
// that lies inside [lo, hi], in units of dx. Summed over a partition of the
// window this reproduces the trapezoid weights.
double cell_cover(const Grid& grid, std::size_t i, double lo, double hi) {
  const double x = grid.x(i);
  const double a = std::max({x - grid.dx / 2.0, lo, 0.0});
  const double b = std::min({x + grid.dx / 2.0, hi, grid.window_width});
  return b > a ? (b - a) / grid.dx : 0.0;
}

std::pair<std::size_t, std::size_t> candidate_range(const Grid& grid, double lo, double hi) {
  const double last = static_cast<double>(grid.nx - 1);
  const double a = std::clamp(std::floor(lo / grid.dx) - 1.0, 0.0, last);
  const double b = std::clamp(std::ceil(hi / grid.dx) + 1.0, 0.0, last);
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b) + 1};
}

double centre_intensity(std::span<const cplx> psi, const Grid& grid, double center) {
  const double s = std::clamp(center / grid.dx, 0.0, static_cast<double>(grid.nx - 1));
  const auto i = std::min(static_cast<std::size_t>(s), grid.nx - 2);
  const double t = s - static_cast<double>(i);
  return std::norm((1.0 - t) * psi[i] + t * psi[i + 1]);
}

}  // namespace

Grid Grid::fit(double window_width, double length, double dx_target, double dz_target) {
  if (!(window_width > 0.0) || !(length > 0.0) || !(dx_target > 0.0) || !(dz_target > 0.0))
    throw ValidationError(fmt::format("grid needs positive W, L, dx, dz (got {}, {}, {}, {})", window_width,
                                      length, dx_target, dz_target));
  Grid g;
  g.window_width = window_width;
  g.length = length;
  const auto cells = std::max<double>(2.0, std::round(window_width / dx_target));
  g.nx = static_cast<std::size_t>(cells) + 1;
  g.dx = window_width / cells;
  const auto steps = std::max<double>(1.0, std::round(length / dz_target));
  g.nz = static_cast<std::size_t>(steps);
  g.dz = length / steps;
  return g;
}

std::vector<InvariantCheck> Grid::check() const {
  std::vector<InvariantCheck> out;
  out.push_back({"grid.steps_positive", dx > 0.0 && dz > 0.0, fmt::format("dx = {}, dz = {}", dx, dz)});
  out.push_back({"grid.min_points", nx >= 3 && nz >= 1, fmt::format("nx = {}, nz = {}", nx, nz)});
  const double span = dx * static_cast<double>(nx > 0 ? nx - 1 : 0);
  out.push_back({"grid.covers_window", std::abs(span - window_width) <= kGridTolerance,
                 fmt::format("dx*(nx-1) = {} vs W = {}", span, window_width)});
  const double run = dz * static_cast<double>(nz);
  out.push_back({"grid.covers_length", std::abs(run - length) <= kGridTolerance,
                 fmt::format("dz*nz = {} vs L = {}", run, length)});
  return out;
}

void Grid::validate() const {
  for (const auto& c : check())
    if (!c.passed) throw ValidationError(fmt::format("{} failed: {}", c.name, c.detail));
}

Port parse_port(std::string_view name) {
  if (name == "P_L1") return {std::string(name), kD1, Side::left};
  if (name == "P_L2") return {std::string(name), kD2, Side::left};
  if (name == "P_R1") return {std::string(name), kD1, Side::right};
  if (name == "P_R2") return {std::string(name), kD2, Side::right};
  throw ConfigError(fmt::format("unknown port '{}' (expected P_L1, P_L2, P_R1 or P_R2)", name));
}

double port_position(const LayoutSpec& layout, const Port& port) {
  if (port.waveguide >= layout.waveguides.size())
    throw ConfigError(fmt::format("port {} refers to missing waveguide {}", port.name, port.waveguide));
  return layout.waveguides[port.waveguide].center(port.side == Side::left ? 0.0 : layout.length);
}

double reference_index(const LayoutSpec& layout, double wavelength_um) {
  if (layout.waveguides.empty()) throw ValidationError("layout has no waveguides");
  const auto& d1 = layout.waveguides.front();
  return solve_te0(std::sqrt(d1.eps_core.real()), std::sqrt(layout.eps_substrate), d1.width, wavelength_um)
      .n_eff;
}

double weighted_power(std::span<const cplx> psi, double dx) {
  if (psi.empty()) return 0.0;
  const double ends = std::norm(psi.front()) + std::norm(psi.back());
  return (kernels::sum_intensity(psi) - 0.5 * ends) * dx;
}

double core_power(std::span<const cplx> psi, const Grid& grid, double center_um, double width_um) {
  const double lo = center_um - width_um / 2.0;
  const double hi = center_um + width_um / 2.0;
  const auto [first, last] = candidate_range(grid, lo, hi);
  double sum = 0.0;
  for (std::size_t i = first; i < last; ++i) sum += cell_cover(grid, i, lo, hi) * std::norm(psi[i]);
  return sum * grid.dx;
}

PropagationResult propagate(const LayoutSpec& layout, std::span<const cplx> launch, const Grid& grid,
                            const PropagationOptions& options) {
  grid.validate();
  if (launch.size() != grid.nx)
    throw ValidationError(fmt::format("launch has {} samples, grid has {}", launch.size(), grid.nx));
  if (std::abs(grid.window_width - layout.window_width) > kGridTolerance ||
      std::abs(grid.length - layout.length) > kGridTolerance)
    throw ValidationError("grid does not match the layout window");
  if (!(options.wavelength_um > 0.0)) throw DomainError("wavelength must be positive");

  const std::size_t nx = grid.nx;
  const std::size_t nwg = layout.waveguides.size();
  const bool backward = options.direction == Direction::backward;

  PropagationResult result;
  result.wavelength_um = options.wavelength_um;
  result.n_ref = options.n_ref ? *options.n_ref : reference_index(layout, options.wavelength_um);

  const double k0 = 2.0 * std::numbers::pi / options.wavelength_um;
  const double beta = k0 * result.n_ref;
  const double n_ref_sq = result.n_ref * result.n_ref;
  const double v_scale = k0 * k0 / (2.0 * beta);
  const double lap_coef = 1.0 / (2.0 * beta * grid.dx * grid.dx);
  const double half_dz = grid.dz / 2.0;

  const cplx off{0.0, half_dz * lap_coef};
  std::vector<cplx> lower(nx, off), upper(nx, off);
  upper[0] = 2.0 * off;
  lower[nx - 1] = 2.0 * off;

  std::vector<cplx> psi(launch.begin(), launch.end());
  std::vector<cplx> eps(nx), v(nx), rhs(nx), diag(nx);
  TridiagonalSolver solver(nx);

  auto& trace = result.trace;
  trace.z_um.reserve(grid.nz + 1);
  trace.total_power.reserve(grid.nz + 1);
  trace.point_intensity.assign(nwg, {});
  trace.core_power.assign(nwg, {});
  for (std::size_t w = 0; w < nwg; ++w) {
    trace.point_intensity[w].reserve(grid.nz + 1);
    trace.core_power[w].reserve(grid.nz + 1);
  }

  auto z_of = [&](double s) { return backward ? layout.length - s : s; };
  auto record = [&](std::size_t step) {
    const double s = static_cast<double>(step) * grid.dz;
    const double z = std::clamp(z_of(s), 0.0, layout.length);
    const double total = weighted_power(psi, grid.dx);
    if (!std::isfinite(total))
      throw NumericalError(fmt::format("non-finite field at z = {} um (step {})", z, step), z);
    trace.z_um.push_back(z);
    trace.total_power.push_back(total);
    for (std::size_t w = 0; w < nwg; ++w) {
      const auto& wg = layout.waveguides[w];
      const double c = wg.center(z);
      trace.point_intensity[w].push_back(centre_intensity(psi, grid, c));
      trace.core_power[w].push_back(core_power(psi, grid, c, wg.width));
    }
    if (options.snapshot_every > 0 && step % options.snapshot_every == 0)
      result.snapshots.push_back({step, z, psi});
  };

  record(0);
  result.launch_power = trace.total_power.front();

  for (std::size_t k = 0; k < grid.nz; ++k) {
    const double z_mid = z_of((static_cast<double>(k) + 0.5) * grid.dz);
    permittivity_row(layout, z_mid, grid.dx, eps);
    kernels::potential(eps, n_ref_sq, v_scale, v);
    kernels::cn_rhs(psi, v, half_dz, lap_coef, rhs);
    kernels::cn_diagonal(v, half_dz, lap_coef, diag);
    solver.solve(lower, diag, upper, rhs, psi);
    record(k + 1);
  }

  result.final_state = {std::move(psi), trace.z_um.back(), options.direction};
  return result;
}

PropagationResult propagate_backward(const LayoutSpec& layout, std::span<const cplx> launch,
                                     const Grid& grid, PropagationOptions options) {
  options.direction = Direction::backward;
  return propagate(layout, launch, grid, options);
}

Transmission transmission(const PropagationResult& result, const LayoutSpec& layout, const Grid& grid) {
  if (!(result.launch_power > 0.0)) throw DomainError("launch power is zero");
  const auto& trace = result.trace;
  Transmission t;
  t.exit_z_um = result.final_state.z_um;
  double cores = 0.0;
  for (std::size_t w = 0; w < layout.waveguides.size(); ++w) {
    const double f = trace.core_power[w].back() / result.launch_power;
    t.port_fraction.push_back(f);
    cores += f;
  }
  // Substrate power: every sample's cell minus the parts claimed by cores.
  const auto& psi = result.final_state.psi;
  std::vector<double> weight(grid.nx);
  for (std::size_t i = 0; i < grid.nx; ++i) weight[i] = cell_cover(grid, i, 0.0, grid.window_width);
  for (const auto& wg : layout.waveguides) {
    const double c = wg.center(t.exit_z_um);
    const auto [first, last] = candidate_range(grid, c - wg.width / 2.0, c + wg.width / 2.0);
    for (std::size_t i = first; i < last; ++i)
      weight[i] -= cell_cover(grid, i, c - wg.width / 2.0, c + wg.width / 2.0);
  }
  double substrate = 0.0;
  for (std::size_t i = 0; i < grid.nx; ++i) substrate += weight[i] * std::norm(psi[i]);
  t.substrate_fraction = substrate * grid.dx / result.launch_power;
  t.total_fraction = cores + t.substrate_fraction;
  if (layout.waveguides.size() >= 2) {
    const double i1 = trace.point_intensity[kD1].back();
    const double i2 = trace.point_intensity[kD2].back();
    constexpr double kFloor = 1e-300;
    t.contrast_db = 10.0 * std::log10(std::max(i1, kFloor) / std::max(i2, kFloor));
  }
  return t;
}

DecayFit extract_gamma(const MonitorTrace& trace) {
  const std::size_t n = trace.samples();
  if (n < 5) throw FitQualityError("trace too short for a decay fit");
  const std::size_t first = n - static_cast<std::size_t>(std::floor(kFitTailFraction * static_cast<double>(n)));

  double sz = 0, sy = 0, szz = 0, szy = 0;
  const auto m = static_cast<double>(n - first);
  std::vector<double> zmm, lnp;
  for (std::size_t k = first; k < n; ++k) {
    const double p = trace.total_power[k];
    if (!(p > 0.0)) throw FitQualityError(fmt::format("non-positive power at z = {} um", trace.z_um[k]));
    // travel distance, so backward traces fit the same way
    const double z = std::abs(trace.z_um[k] - trace.z_um.front()) / 1000.0;
    const double y = std::log(p);
    zmm.push_back(z);
    lnp.push_back(y);
    sz += z;
    sy += y;
    szz += z * z;
    szy += z * y;
  }
  const double denom = m * szz - sz * sz;
  const double slope = (m * szy - sz * sy) / denom;
  const double intercept = (sy - slope * sz) / m;

  double worst = 0.0;
  for (std::size_t k = 0; k < zmm.size(); ++k)
    worst = std::max(worst, std::abs(std::exp(lnp[k] - (intercept + slope * zmm[k])) - 1.0));
  if (worst > kFitMaxOscillation)
    throw FitQualityError(fmt::format("power trace deviates {:.1f}% from an exponential", 100.0 * worst));

  DecayFit fit;
  fit.power_rate_per_mm = -slope;
  fit.amplitude_rate_per_mm = -slope / 2.0;
  fit.max_relative_residual = worst;
  return fit;
}

DecayFit measure_isolated_decay(const IsolatedGuide& guide) {
  LayoutSpec layout;
  layout.eps_substrate = guide.eps_substrate;
  layout.window_width = guide.window_um;
  layout.length = guide.length_um;
  const double center = guide.window_um / 2.0;
  layout.waveguides.push_back(
      {"guide", Trajectory::constant(center, 0.0, guide.length_um), guide.width_um, guide.eps_core});
  validate_layout(layout);

  const auto grid = Grid::for_layout(layout, guide.dx, guide.dz);
  const auto mode = solve_te0(std::sqrt(guide.eps_core.real()), std::sqrt(guide.eps_substrate), guide.width_um,
                              guide.wavelength_um);
  const auto launch = mode_launch(mode, center, grid);
  PropagationOptions opts;
  opts.wavelength_um = guide.wavelength_um;
  opts.n_ref = mode.n_eff;
  return extract_gamma(propagate(layout, launch, grid, opts).trace);
}

}  // namespace wgtrap
