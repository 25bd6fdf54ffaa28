#include "wgtrap/output.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "wgtrap/errors.hpp"
#include "wgtrap/kernels.hpp"

namespace wgtrap {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  return out;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

double at_or_zero(const std::vector<std::vector<double>>& series, std::size_t w, std::size_t k) {
  return w < series.size() ? series[w][k] : 0.0;
}

ordered_json grid_json(const Grid& g) {
  return {{"dx_um", g.dx}, {"dz_um", g.dz}, {"nx", g.nx}, {"nz", g.nz}, {"window_width_um", g.window_width},
          {"length_um", g.length}};
}

}  // namespace

void write_text(const fs::path& path, std::string_view text) {
  auto out = open_out(path);
  out << text;
}

void write_trace_csv(const fs::path& path, const MonitorTrace& trace) {
  auto out = open_out(path);
  out << "z_um,P1,P2,P3\n";
  for (std::size_t k = 0; k < trace.samples(); ++k)
    out << num(trace.z_um[k]) << ',' << num(at_or_zero(trace.point_intensity, 0, k)) << ','
        << num(at_or_zero(trace.point_intensity, 1, k)) << ',' << num(at_or_zero(trace.point_intensity, 2, k))
        << '\n';
}

void write_core_power_csv(const fs::path& path, const MonitorTrace& trace) {
  auto out = open_out(path);
  out << "z_um,C1,C2,C3,total\n";
  for (std::size_t k = 0; k < trace.samples(); ++k)
    out << num(trace.z_um[k]) << ',' << num(at_or_zero(trace.core_power, 0, k)) << ','
        << num(at_or_zero(trace.core_power, 1, k)) << ',' << num(at_or_zero(trace.core_power, 2, k)) << ','
        << num(trace.total_power[k]) << '\n';
}

void write_snapshots(const fs::path& dir, const PropagationResult& result, const Grid& grid) {
  for (const auto& snap : result.snapshots) {
    auto out = open_out(dir / fmt::format("snapshot_{:06d}.csv", snap.step));
    out << "x_um,re_psi,im_psi,intensity\n";
    for (std::size_t i = 0; i < snap.psi.size(); ++i)
      out << num(grid.x(i)) << ',' << num(snap.psi[i].real()) << ',' << num(snap.psi[i].imag()) << ','
          << num(std::norm(snap.psi[i])) << '\n';
  }
}

void write_cme_csv(const fs::path& path, const CmeTrace& trace) {
  auto out = open_out(path);
  out << "z_mm,P1,P2,P3\n";
  for (std::size_t k = 0; k < trace.z_mm.size(); ++k)
    out << num(trace.z_mm[k]) << ',' << num(trace.p1[k]) << ',' << num(trace.p2[k]) << ',' << num(trace.p3[k])
        << '\n';
}

void write_schedule_csv(const fs::path& path, const CmeParams& params, std::size_t n) {
  auto out = open_out(path);
  out << "z_mm,kappa13,kappa23\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double z = params.length * static_cast<double>(i) / static_cast<double>(n > 1 ? n - 1 : 1);
    out << num(z) << ',' << num(params.kappa13(z)) << ',' << num(params.kappa23(z)) << '\n';
  }
}

std::string run_metadata_json(const Preset& preset, const PortRun& run, std::string_view engine) {
  ordered_json j;
  j["preset"] = preset.id;
  j["preset_hash"] = preset.hash;
  j["preset_source"] = preset.source;
  j["engine"] = engine;
  j["port"] = run.port.name;
  j["direction"] = run.port.side == Side::left ? "+z" : "-z";
  j["wavelength_um"] = run.wavelength_um;
  j["n_ref"] = run.result.n_ref;
  j["launch_waist_um"] = preset.launch_waist_um;
  j["grid"] = grid_json(run.grid);
  j["kernels"] = kernels::backend_name(kernels::active_backend());
  j["version"] = WGTRAP_VERSION;
  return j.dump(2) + "\n";
}

std::string transmission_json(const PortRun& run) {
  const auto& t = run.transmission;
  ordered_json j;
  j["port"] = run.port.name;
  j["exit_z_um"] = t.exit_z_um;
  ordered_json fr;
  for (std::size_t w = 0; w < t.port_fraction.size(); ++w) fr[fmt::format("D{}", w + 1)] = t.port_fraction[w];
  j["fractions"] = fr;
  j["substrate_fraction"] = t.substrate_fraction;
  j["total_fraction"] = t.total_fraction;
  j["contrast_db"] = t.contrast_db;
  return j.dump(2) + "\n";
}

fs::path write_sweep(const fs::path& dir, const SweepResult& result) {
  const auto stem = fmt::format("{}_{}_{}", result.config.preset_id, axis_name(result.config.axis),
                                result.started_utc);
  const auto csv = dir / (stem + ".csv");
  {
    auto out = open_out(csv);
    out << "axis,value,port,valid,P1,P2,P3,total,substrate,contrast_db,n_ref,reason\n";
    for (const auto& r : result.rows) {
      auto f = [&](std::size_t w) { return w < r.fractions.size() ? num(r.fractions[w]) : std::string{}; };
      std::string reason = r.reason;
      for (auto& c : reason)
        if (c == '"' || c == '\n' || c == ',') c = ' ';
      out << axis_name(result.config.axis) << ',' << num(r.axis_value) << ',' << r.port << ','
          << (r.valid ? 1 : 0) << ',' << f(0) << ',' << f(1) << ',' << f(2) << ','
          << (r.valid ? num(r.total) : "") << ',' << (r.valid ? num(r.substrate) : "") << ','
          << (r.valid ? num(r.contrast_db) : "") << ',' << (r.valid ? num(r.n_ref) : "") << ',' << reason
          << '\n';
    }
  }
  ordered_json j;
  j["preset"] = result.config.preset_id;
  j["preset_hash"] = result.preset_hash;
  j["axis"] = axis_name(result.config.axis);
  j["range"] = {{"start", result.config.range.start}, {"stop", result.config.range.stop},
                {"count", result.config.range.count}};
  j["ports"] = result.config.ports;
  j["workers"] = result.config.workers;
  j["grid"] = {{"dx_um", result.dx_um}, {"dz_um", result.dz_um}};
  j["version"] = result.version;
  j["kernels"] = kernels::backend_name(kernels::active_backend());
  j["started_utc"] = result.started_utc;
  j["finished_utc"] = result.finished_utc;
  j["rows"] = result.rows.size();
  write_text(dir / (stem + ".json"), j.dump(2) + "\n");
  return csv;
}

std::string reciprocity_json(const ReciprocityReport& r) {
  ordered_json j;
  j["preset"] = r.preset_id;
  j["wavelength_um"] = r.wavelength_um;
  j["T_L1_R1"] = r.l1_to_r1;
  j["T_R1_L1"] = r.r1_to_l1;
  j["T_L2_R1"] = r.l2_to_r1;
  j["T_R1_L2"] = r.r1_to_l2;
  j["abs_mismatch_1"] = r.abs_mismatch_1();
  j["rel_mismatch_1"] = r.rel_mismatch_1();
  j["abs_mismatch_2"] = r.abs_mismatch_2();
  j["rel_mismatch_2"] = r.rel_mismatch_2();
  return j.dump(2) + "\n";
}

}  // namespace wgtrap
