#include "wgtrap/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wgtrap/errors.hpp"

namespace wgtrap {

namespace {

constexpr double kJoinTolerance = 1e-9;
// Sampling step for the pairwise-overlap scan, um.
constexpr double kOverlapScanStep = 0.5;
// Intervals shorter than this are not split further.
constexpr double kOverlapResolution = 1e-3;

bool in_core(double x, double center, double width) {
  return x >= center - width / 2.0 && x < center + width / 2.0;
}

}  // namespace

double center_at(const Trajectory& trajectory, double z_um) { return trajectory(z_um); }

cplx epsilon_at(const LayoutSpec& layout, double x_um, double z_um) {
  if (!(x_um >= 0.0 && x_um <= layout.window_width) || !(z_um >= 0.0 && z_um <= layout.length))
    throw DomainError(fmt::format("point (x={}, z={}) outside the {} x {} um window", x_um, z_um,
                                  layout.window_width, layout.length));
  for (const auto& wg : layout.waveguides) {
    if (in_core(x_um, wg.center(z_um), wg.width)) return wg.eps_core;
  }
  return {layout.eps_substrate, 0.0};
}

void permittivity_row(const LayoutSpec& layout, double z_um, double dx, std::span<cplx> out) {
  std::fill(out.begin(), out.end(), cplx(layout.eps_substrate, 0.0));
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  for (const auto& wg : layout.waveguides) {
    const double c = wg.center(z_um);
    const double lo = c - wg.width / 2.0;
    const double hi = c + wg.width / 2.0;
    const cplx contrast = wg.eps_core - layout.eps_substrate;
    const auto first = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::floor(lo / dx)));
    const auto last = std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(std::ceil(hi / dx)));
    for (auto i = first; i <= last; ++i) {
      const double x = static_cast<double>(i) * dx;
      const double cover = std::min(x + dx / 2.0, hi) - std::max(x - dx / 2.0, lo);
      if (cover > 0.0) out[static_cast<std::size_t>(i)] += (cover / dx) * contrast;
    }
  }
}

LayoutSpec scale_layout(const LayoutSpec& layout, double eta_z, double eta_t, double gap_shift) {
  if (!(eta_z > 0.0) || !(eta_t > 0.0))
    throw DomainError(fmt::format("scale factors must be positive (eta_z={}, eta_t={})", eta_z, eta_t));
  if (layout.waveguides.size() < 2) throw ValidationError("scale_layout needs D1 and D2");
  LayoutSpec out = layout;
  out.length = layout.length * eta_z;
  for (std::size_t i = 0; i < out.waveguides.size(); ++i) {
    auto& wg = out.waveguides[i];
    wg.center = wg.center.scaled_z(eta_z);
    if (i == kD1 || i == kD2) wg.width *= eta_t;
    if (i == kD1) wg.center = wg.center.shifted(gap_shift);
    if (i == kD2) wg.center = wg.center.shifted(-gap_shift);
  }
  validate_layout(out);
  return out;
}

std::vector<InvariantCheck> check_layout(const LayoutSpec& layout) {
  std::vector<InvariantCheck> checks;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };

  add("layout.substrate_positive", layout.eps_substrate > 0.0,
      fmt::format("eps_substrate = {}", layout.eps_substrate));
  add("layout.window_positive", layout.window_width > 0.0 && layout.length > 0.0,
      fmt::format("W = {} um, L = {} um", layout.window_width, layout.length));
  add("layout.has_waveguides", !layout.waveguides.empty());
  if (!(layout.window_width > 0.0 && layout.length > 0.0)) return checks;

  bool trajectories_ok = true;
  for (const auto& wg : layout.waveguides) {
    const auto& c = wg.center;
    const auto tag = [&](const char* what) { return fmt::format("{}.{}", wg.name, what); };
    add(tag("width_positive"), wg.width > 0.0, fmt::format("width = {} um", wg.width));
    add(tag("guiding"), wg.eps_core.real() > layout.eps_substrate,
        fmt::format("Re eps_core = {} vs eps_substrate = {}", wg.eps_core.real(), layout.eps_substrate));
    add(tag("passive"), wg.eps_core.imag() <= 0.0, fmt::format("Im eps_core = {}", wg.eps_core.imag()));
    const bool contiguous = c.max_gap() <= kJoinTolerance;
    const bool starts = std::abs(c.z_begin()) <= kJoinTolerance;
    const bool ends = std::abs(c.z_end() - layout.length) <= kJoinTolerance;
    const bool continuous = c.max_join_jump() <= kJoinTolerance;
    add(tag("trajectory_contiguous"), contiguous, fmt::format("max gap {} um", c.max_gap()));
    add(tag("trajectory_starts_at_zero"), starts, fmt::format("starts at z = {} um", c.z_begin()));
    add(tag("trajectory_ends_at_length"), ends,
        fmt::format("ends at z = {} um, L = {} um", c.z_end(), layout.length));
    add(tag("trajectory_continuous"), continuous, fmt::format("max join jump {} um", c.max_join_jump()));
    trajectories_ok = trajectories_ok && contiguous && starts && ends;
  }
  if (!trajectories_ok) return checks;

  for (const auto& wg : layout.waveguides) {
    const auto [lo, hi] = wg.center.range(0.0, layout.length);
    const double left = lo - wg.width / 2.0;
    const double right = hi + wg.width / 2.0;
    add(fmt::format("{}.window_margin", wg.name), left > 0.0 && right < layout.window_width,
        fmt::format("core spans [{}, {}] um inside (0, {})", left, right, layout.window_width));
  }

  // Pairwise overlap: start from a fixed z step plus every segment
  // breakpoint, then refine any interval whose value ranges cannot rule out
  // contact.
  std::vector<double> zs;
  const auto steps = static_cast<std::size_t>(std::ceil(layout.length / kOverlapScanStep));
  for (std::size_t k = 0; k <= steps; ++k)
    zs.push_back(std::min(layout.length, static_cast<double>(k) * kOverlapScanStep));
  for (const auto& wg : layout.waveguides)
    for (const auto& s : wg.center.segments()) zs.push_back(std::clamp(s.z_start, 0.0, layout.length));
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

  for (std::size_t a = 0; a < layout.waveguides.size(); ++a) {
    for (std::size_t b = a + 1; b < layout.waveguides.size(); ++b) {
      const auto& wa = layout.waveguides[a];
      const auto& wb = layout.waveguides[b];
      const double half = (wa.width + wb.width) / 2.0;
      auto gap_at = [&](double z) { return std::abs(wa.center(z) - wb.center(z)) - half; };
      double min_gap = INFINITY;
      double at = 0.0;
      auto visit = [&](double z) {
        const double g = gap_at(z);
        if (g < min_gap) {
          min_gap = g;
          at = z;
        }
      };
      for (double z : zs) visit(z);
      std::vector<std::pair<double, double>> todo;
      for (std::size_t k = 0; k + 1 < zs.size(); ++k) todo.emplace_back(zs[k], zs[k + 1]);
      while (!todo.empty() && min_gap > 0.0) {
        const auto [z0, z1] = todo.back();
        todo.pop_back();
        const auto [alo, ahi] = wa.center.range(z0, z1);
        const auto [blo, bhi] = wb.center.range(z0, z1);
        if (std::max(blo - ahi, alo - bhi) - half > 0.0) continue;
        const double mid = 0.5 * (z0 + z1);
        visit(mid);
        if (z1 - z0 > kOverlapResolution) {
          todo.emplace_back(z0, mid);
          todo.emplace_back(mid, z1);
        }
      }
      add(fmt::format("cores_disjoint.{}_{}", wa.name, wb.name), min_gap > 0.0,
          fmt::format("min edge gap {} um at z = {} um", min_gap, at));
    }
  }
  return checks;
}

void validate_layout(const LayoutSpec& layout) {
  std::string failed;
  for (const auto& c : check_layout(layout)) {
    if (c.passed) continue;
    if (!failed.empty()) failed += "; ";
    failed += c.name + " (" + c.detail + ")";
  }
  if (!failed.empty()) throw ValidationError("layout invalid: " + failed);
}

}  // namespace wgtrap
