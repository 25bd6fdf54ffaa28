#pragma once

#include <filesystem>
#include <string>

#include "wgtrap/bpm.hpp"
#include "wgtrap/cme.hpp"
#include "wgtrap/preset.hpp"
#include "wgtrap/sweep.hpp"

namespace wgtrap {

namespace fs = std::filesystem;

// All numbers are written with 17 significant digits so files round-trip.

// z_um, P1, P2, P3 from the centre-point intensities.
void write_trace_csv(const fs::path& path, const MonitorTrace& trace);
// z_um, C1, C2, C3 integrated core powers, plus the total norm.
void write_core_power_csv(const fs::path& path, const MonitorTrace& trace);
// One snapshot_<step>.csv per snapshot: x_um, re_psi, im_psi, intensity.
void write_snapshots(const fs::path& dir, const PropagationResult& result, const Grid& grid);

// z_mm, P1, P2, P3.
void write_cme_csv(const fs::path& path, const CmeTrace& trace);
// z_mm, kappa13, kappa23 sampled n times.
void write_schedule_csv(const fs::path& path, const CmeParams& params, std::size_t n);

// JSON metadata for a BPM run: preset id/hash, grid, n_ref, wavelength, port,
// engine, kernel backend and code version.
std::string run_metadata_json(const Preset& preset, const PortRun& run, std::string_view engine);
std::string transmission_json(const PortRun& run);

// <preset>_<axis>_<timestamp>.csv plus a .json sidecar echoing the
// config. Returns the CSV path.
fs::path write_sweep(const fs::path& dir, const SweepResult& result);

std::string reciprocity_json(const ReciprocityReport& report);

void write_text(const fs::path& path, std::string_view text);

}  // namespace wgtrap
