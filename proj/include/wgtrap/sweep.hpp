#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wgtrap/bpm.hpp"
#include "wgtrap/preset.hpp"

namespace wgtrap {

enum class SweepAxis { wavelength, eta_z, eta_t, gap_g, eps_core_global, eps3_real, eps3_imag };

std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);
// "um", "1" (scale factors) or "eps0" (relative permittivity).
std::string_view axis_unit(SweepAxis axis);

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 2;
  // start + (stop - start) * i / (count - 1); the last value is stop exactly.
  std::vector<double> values() const;
};

struct SweepConfig {
  std::string preset_id;
  SweepAxis axis = SweepAxis::wavelength;
  SweepRange range;
  std::vector<std::string> ports{"P_L1", "P_L2"};
  unsigned workers = 0;  // 0: hardware concurrency
};

SweepConfig parse_sweep_config(std::string_view json_text);
SweepConfig load_sweep_config(const std::string& path);

// One BPM propagation for a preset (or a modified copy of its layout).
struct PortRun {
  Port port;
  Grid grid;
  double wavelength_um = 0.0;
  PropagationResult result;
  Transmission transmission;
};

PortRun simulate_port(const Preset& preset, const LayoutSpec& layout, double wavelength_um,
                      std::string_view port, std::size_t snapshot_every = 0);
inline PortRun simulate_port(const Preset& preset, std::string_view port, std::size_t snapshot_every = 0) {
  return simulate_port(preset, preset.layout, preset.wavelength_um, port, snapshot_every);
}

// Layout and wavelength at one axis value. Throws ValidationError or
// DomainError when the sample leaves the valid domain.
struct AxisSample {
  LayoutSpec layout;
  double wavelength_um = 0.0;
};
AxisSample apply_axis(const Preset& preset, SweepAxis axis, double value);

struct SweepRow {
  double axis_value = 0.0;
  std::string port;
  bool valid = true;
  std::string reason;               // why the sample was skipped
  std::vector<double> fractions;    // exit core power per waveguide / launch power
  double total = 0.0;
  double substrate = 0.0;
  double contrast_db = 0.0;
  double n_ref = 0.0;
  double trapped() const { return fractions.empty() ? 0.0 : fractions[kD1]; }
};

SweepRow sweep_row(const Preset& preset, SweepAxis axis, double value, std::string_view port);

struct SweepResult {
  SweepConfig config;
  std::string preset_hash;
  double dx_um = 0.0;
  double dz_um = 0.0;
  std::string version;
  std::string started_utc;
  std::string finished_utc;
  std::vector<SweepRow> rows;  // ordered by axis value, then port

  // Rows of one port in axis order.
  std::vector<SweepRow> port_rows(std::string_view port) const;
};

SweepResult run_sweep(const SweepConfig& config);
SweepResult run_sweep(const Preset& preset, const SweepConfig& config);

struct ReciprocityReport {
  std::string preset_id;
  double wavelength_um = 0.0;
  double l1_to_r1 = 0.0, r1_to_l1 = 0.0;
  double l2_to_r1 = 0.0, r1_to_l2 = 0.0;
  double abs_mismatch_1() const;
  double abs_mismatch_2() const;
  double rel_mismatch_1() const;
  double rel_mismatch_2() const;
};

ReciprocityReport reciprocity_check(const Preset& preset, double wavelength_um);
ReciprocityReport reciprocity_check(std::string_view preset_id, double wavelength_um);

// 0.70-0.90 um in 10 nm steps, both left ports.
SweepResult bandwidth_800(unsigned workers = 0);

// Left-right nonreciprocity: both left ports deliver at least
// kSignatureMinTrapped into D1 while D2 carries at most
// kSignatureMaxResidue of the D1 power.
inline constexpr double kSignatureMinTrapped = 0.10;
inline constexpr double kSignatureMaxResidue = 0.01;
bool lrnr_signature(const SweepRow& from_l1, const SweepRow& from_l2);

std::string utc_timestamp();

}  // namespace wgtrap
