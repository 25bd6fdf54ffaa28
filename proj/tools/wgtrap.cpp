// wgtrap command-line front end. Orchestration only: every number printed
// here comes from the library.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "wgtrap/bpm.hpp"
#include "wgtrap/cme.hpp"
#include "wgtrap/errors.hpp"
#include "wgtrap/kernels.hpp"
#include "wgtrap/modes.hpp"
#include "wgtrap/output.hpp"
#include "wgtrap/preset.hpp"
#include "wgtrap/sweep.hpp"

namespace {

using namespace wgtrap;

enum Exit : int { kOk = 0, kFailed = 1, kConfig = 2, kValidation = 3, kNumerical = 4 };

int report_error(std::string_view kind, std::string_view message, int code,
                 std::optional<double> z_um = std::nullopt) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (z_um) j["z_um"] = *z_um;
  std::cerr << j.dump() << '\n';
  return code;
}

fs::path output_root(const std::string& out) {
  if (!out.empty()) return out;
  if (const char* env = std::getenv("WGTRAP_OUT"); env && *env) return env;
  return "wgtrap_out";
}

struct RunArgs {
  std::string preset = "lrnr_1550";
  std::string config;
  std::string port = "P_L2";
  std::string engine = "bpm";
  std::optional<double> dx, dz, wavelength;
  std::string out;
  std::size_t dump_every = 0;
};

int cmd_run(const RunArgs& a) {
  Preset preset = a.config.empty() ? load_preset(a.preset) : load_preset_file(a.config);
  if (a.dx) preset.dx_um = *a.dx;
  if (a.dz) preset.dz_um = *a.dz;
  if (a.wavelength) preset.wavelength_um = *a.wavelength;
  validate_layout(preset.layout);
  Grid::for_layout(preset.layout, preset.dx_um, preset.dz_um).validate();
  const auto port = parse_port(a.port);
  const bool want_bpm = a.engine != "cme";
  const bool want_cme = a.engine != "bpm";
  std::optional<CmeParams> cme_params;
  std::optional<CmeState> cme_start;
  if (want_cme) {
    cme_params = cme_params_from_preset(preset);
    if (port.side != Side::left) throw ConfigError("the CME engine models left-port launches only");
    cme_start = port.waveguide == kD1 ? CmeState{1.0, 0.0, 0.0, 0.0} : CmeState{0.0, 1.0, 0.0, 0.0};
  }

  const auto dir = output_root(a.out) / fmt::format("{}_{}_{}_{}", preset.id, port.name, a.engine, utc_timestamp());
  nlohmann::ordered_json summary;
  summary["preset"] = preset.id;
  summary["port"] = port.name;
  summary["engine"] = a.engine;
  summary["output_dir"] = dir.string();

  std::optional<PortRun> run;
  if (want_bpm) {
    run = simulate_port(preset, preset.layout, preset.wavelength_um, port.name, a.dump_every);
    write_trace_csv(dir / "trace.csv", run->result.trace);
    write_core_power_csv(dir / "core_power.csv", run->result.trace);
    if (a.dump_every > 0) write_snapshots(dir / "snapshots", run->result, run->grid);
    write_text(dir / "run.json", run_metadata_json(preset, *run, a.engine));
    write_text(dir / "transmission.json", transmission_json(*run));
    const auto& t = run->transmission;
    summary["bpm"] = {{"fractions", t.port_fraction}, {"contrast_db", t.contrast_db}, {"n_ref", run->result.n_ref}};
  }
  std::optional<CmeTrace> cme;
  if (want_cme) {
    cme = integrate(*cme_params, *cme_start);
    write_cme_csv(dir / "cme_trace.csv", *cme);
    write_schedule_csv(dir / "cme_schedules.csv", *cme_params, 1001);
    nlohmann::ordered_json meta;
    meta["preset"] = preset.id;
    meta["preset_hash"] = preset.hash;
    meta["engine"] = "cme";
    meta["delta13_per_mm"] = cme_params->delta13;
    meta["delta23_per_mm"] = cme_params->delta23;
    meta["gamma_per_mm"] = cme_params->gamma;
    meta["length_mm"] = cme_params->length;
    meta["dz_mm"] = cme->z_mm[1] - cme->z_mm[0];
    meta["version"] = WGTRAP_VERSION;
    write_text(dir / "cme.json", meta.dump(2) + "\n");
    const auto& f = cme->final_state;
    summary["cme"] = {{"P1", f.p1()}, {"P2", f.p2()}, {"P3", f.p3()}};
  }
  if (run && cme) {
    const auto dev = compare_traces(run->result.trace, *cme);
    nlohmann::ordered_json d;
    d["max_abs_deviation"] = dev.max_abs;
    d["worst"] = dev.worst();
    d["final_P1_bpm_fraction"] = run->transmission.port_fraction[kD1];
    d["final_P1_cme"] = cme->final_state.p1();
    d["final_P1_difference"] = std::abs(run->transmission.port_fraction[kD1] - cme->final_state.p1());
    write_text(dir / "deviation.json", d.dump(2) + "\n");
    summary["deviation"] = d;
  }
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out, unsigned workers) {
  auto config = load_sweep_config(config_path);
  if (workers) config.workers = workers;
  const auto result = run_sweep(config);
  const auto csv = write_sweep(output_root(out), result);
  std::size_t invalid = 0;
  for (const auto& r : result.rows) invalid += r.valid ? 0 : 1;
  nlohmann::ordered_json j;
  j["csv"] = csv.string();
  j["rows"] = result.rows.size();
  j["invalid_rows"] = invalid;
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_modes(const std::vector<double>& widths, const std::vector<double>& wavelengths, double eps_core,
              double eps_clad) {
  std::cout << "width_um,wavelength_um,n_eff,beta_per_um,confinement\n";
  for (double w : widths)
    for (double lam : wavelengths) {
      const auto m = solve_te0(std::sqrt(eps_core), std::sqrt(eps_clad), w, lam);
      std::cout << fmt::format("{},{},{:.12f},{:.12f},{:.9f}\n", w, lam, m.n_eff, m.beta, m.confinement());
    }
  return kOk;
}

int cmd_validate(const std::string& path) {
  const auto preset = load_preset_file(path);
  auto checks = check_layout(preset.layout);
  {
    Grid g;
    try {
      g = Grid::for_layout(preset.layout, preset.dx_um, preset.dz_um);
      for (auto& c : g.check()) checks.push_back(std::move(c));
    } catch (const ValidationError& e) {
      checks.push_back({"grid.constructible", false, e.what()});
    }
  }
  if (preset.cme) {
    CmeParams p;
    p.delta13 = preset.cme->delta13;
    p.delta23 = preset.cme->delta23;
    p.gamma = preset.cme->gamma;
    p.kappa13 = preset.cme->kappa13;
    p.kappa23 = preset.cme->kappa23;
    p.length = preset.layout.length / 1000.0;
    for (auto& c : check_schedules(p)) checks.push_back(std::move(c));
  }
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    std::cout << fmt::format("{} {} ({})\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
  }
  std::cout << fmt::format("{}: {} checks, {}\n", path, checks.size(), ok ? "all passed" : "FAILED");
  return ok ? kOk : kFailed;
}

int cmd_reciprocity(const std::string& preset_id, std::optional<double> wavelength) {
  const auto preset = load_preset(preset_id);
  const auto rep = reciprocity_check(preset, wavelength.value_or(preset.wavelength_um));
  std::cout << reciprocity_json(rep);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-waveguide light trap simulator (BPM and coupled-mode engines)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(WGTRAP_VERSION));
  std::string kernels_choice;
  app.add_option("--kernels", kernels_choice, "Force the kernel backend (scalar|avx2)")
      ->check(CLI::IsMember({"scalar", "avx2"}));

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Propagate one launch port through a preset");
  run_cmd->add_option("--preset", run.preset, "Preset id")->capture_default_str();
  run_cmd->add_option("--config", run.config, "Preset JSON file instead of a bundled id");
  run_cmd->add_option("--port", run.port, "Launch port (P_L1, P_L2, P_R1, P_R2)")->capture_default_str();
  run_cmd->add_option("--engine", run.engine, "bpm, cme or both")
      ->check(CLI::IsMember({"bpm", "cme", "both"}))
      ->capture_default_str();
  run_cmd->add_option("--dx", run.dx, "Transverse step override, um");
  run_cmd->add_option("--dz", run.dz, "Longitudinal step override, um");
  run_cmd->add_option("--wavelength", run.wavelength, "Wavelength override, um");
  run_cmd->add_option("--out", run.out, "Output root (default $WGTRAP_OUT or ./wgtrap_out)");
  run_cmd->add_option("--dump-every", run.dump_every, "Write a field snapshot every k steps");

  std::string sweep_config, sweep_out;
  unsigned sweep_workers = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
  sweep_cmd->add_option("config", sweep_config, "Sweep config file")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output root (default $WGTRAP_OUT or ./wgtrap_out)");
  sweep_cmd->add_option("--workers", sweep_workers, "Worker threads (0: all cores)");

  std::vector<double> widths{2.0, 4.0}, wavelengths{1.55};
  double eps_core = 10.76, eps_clad = 10.56;
  auto* modes_cmd = app.add_subcommand("modes", "TE0 index of isolated slab guides");
  modes_cmd->add_option("--width", widths, "Core widths, um")->capture_default_str();
  modes_cmd->add_option("--wavelength", wavelengths, "Wavelengths, um")->capture_default_str();
  modes_cmd->add_option("--eps-core", eps_core, "Core permittivity")->capture_default_str();
  modes_cmd->add_option("--eps-clad", eps_clad, "Cladding permittivity")->capture_default_str();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check layout, grid and schedule invariants");
  validate_cmd->add_option("file", validate_path, "Preset JSON file")->required();

  std::string rec_preset = "lrnr_1550";
  std::optional<double> rec_wavelength;
  auto* rec_cmd = app.add_subcommand("reciprocity", "Forward/backward transmission comparison");
  rec_cmd->add_option("--preset", rec_preset, "Preset id")->capture_default_str();
  rec_cmd->add_option("--wavelength", rec_wavelength, "Wavelength, um (default: preset)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kernels_choice.empty())
      kernels::set_backend(kernels_choice == "avx2" ? kernels::Backend::avx2 : kernels::Backend::scalar);
    if (*run_cmd) return cmd_run(run);
    if (*sweep_cmd) return cmd_sweep(sweep_config, sweep_out, sweep_workers);
    if (*modes_cmd) return cmd_modes(widths, wavelengths, eps_core, eps_clad);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*rec_cmd) return cmd_reciprocity(rec_preset, rec_wavelength);
  } catch (const LookupError& e) {
    return report_error("config error", e.what(), kConfig);
  } catch (const ConfigError& e) {
    return report_error("config error", e.what(), kConfig);
  } catch (const ValidationError& e) {
    return report_error("validation error", e.what(), kValidation);
  } catch (const NumericalError& e) {
    return report_error("numerical error", e.what(), kNumerical, e.z_um());
  } catch (const DomainError& e) {
    return report_error("domain error", e.what(), kValidation);
  } catch (const FitQualityError& e) {
    return report_error("fit quality error", e.what(), kNumerical);
  } catch (const std::exception& e) {
    return report_error("error", e.what(), kFailed);
  }
  return kFailed;
}
