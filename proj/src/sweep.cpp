#include "wgtrap/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "wgtrap/errors.hpp"
#include "wgtrap/modes.hpp"

namespace wgtrap {

namespace {

constexpr std::array<std::pair<SweepAxis, std::string_view>, 7> kAxes{{
    {SweepAxis::wavelength, "wavelength"},
    {SweepAxis::eta_z, "eta_z"},
    {SweepAxis::eta_t, "eta_t"},
    {SweepAxis::gap_g, "gap_g"},
    {SweepAxis::eps_core_global, "eps_core_global"},
    {SweepAxis::eps3_real, "eps3_real"},
    {SweepAxis::eps3_imag, "eps3_imag"},
}};

int port_rank(std::string_view p) {
  constexpr std::array<std::string_view, 4> order{"P_L1", "P_L2", "P_R1", "P_R2"};
  return static_cast<int>(std::find(order.begin(), order.end(), p) - order.begin());
}

double relative(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

}  // namespace

std::string_view axis_name(SweepAxis axis) {
  for (const auto& [a, n] : kAxes)
    if (a == axis) return n;
  return "?";
}

std::string_view axis_unit(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::wavelength:
    case SweepAxis::gap_g:
      return "um";
    case SweepAxis::eta_z:
    case SweepAxis::eta_t:
      return "1";
    default:
      return "eps0";
  }
}

SweepAxis parse_axis(std::string_view name) {
  for (const auto& [a, n] : kAxes)
    if (n == name) return a;
  throw ConfigError(fmt::format("unknown sweep axis '{}'", name));
}

std::vector<double> SweepRange::values() const {
  if (count < 2) throw ConfigError("sweep range needs count >= 2");
  std::vector<double> v(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = start + (stop - start) * static_cast<double>(i) / n;
  v.back() = stop;
  return v;
}

SweepConfig parse_sweep_config(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(fmt::format("sweep config {}:{}: {}", line, col, e.what()));
  }
  try {
    SweepConfig c;
    c.preset_id = j.at("preset").get<std::string>();
    c.axis = parse_axis(j.at("axis").get<std::string>());
    if (j.contains("units")) {
      const auto unit = j.at("units").at("axis").get<std::string>();
      if (unit != axis_unit(c.axis))
        throw ConfigError(fmt::format("axis {} is in '{}', config says '{}'", axis_name(c.axis), axis_unit(c.axis), unit));
    }
    const auto& r = j.at("range");
    c.range.start = r.at("start").get<double>();
    c.range.stop = r.at("stop").get<double>();
    const auto count = r.at("count").get<long long>();
    if (count < 2) throw ConfigError("sweep range needs count >= 2");
    c.range.count = static_cast<std::size_t>(count);
    if (j.contains("ports")) c.ports = j.at("ports").get<std::vector<std::string>>();
    if (c.ports.empty()) throw ConfigError("sweep needs at least one launch port");
    for (const auto& p : c.ports) {
      if (p != "P_L1" && p != "P_L2" && p != "P_R1")
        throw ConfigError(fmt::format("sweep launch port must be P_L1, P_L2 or P_R1 (got '{}')", p));
    }
    c.workers = j.value("workers", 0u);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("sweep config: {}", e.what()));
  }
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read sweep config {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config(ss.str());
}

PortRun simulate_port(const Preset& preset, const LayoutSpec& layout, double wavelength_um, std::string_view port,
                      std::size_t snapshot_every) {
  PortRun run;
  run.port = parse_port(port);
  run.wavelength_um = wavelength_um;
  run.grid = Grid::for_layout(layout, preset.dx_um, preset.dz_um);
  const auto launch = gaussian_launch(port_position(layout, run.port), preset.launch_waist_um, run.grid);
  PropagationOptions opts;
  opts.wavelength_um = wavelength_um;
  opts.direction = port_direction(run.port);
  opts.snapshot_every = snapshot_every;
  run.result = propagate(layout, launch, run.grid, opts);
  run.transmission = transmission(run.result, layout, run.grid);
  return run;
}

AxisSample apply_axis(const Preset& preset, SweepAxis axis, double value) {
  AxisSample s{preset.layout, preset.wavelength_um};
  auto& wgs = s.layout.waveguides;
  switch (axis) {
    case SweepAxis::wavelength:
      if (!(value > 0.0)) throw DomainError(fmt::format("wavelength {} um is not positive", value));
      s.wavelength_um = value;
      return s;
    case SweepAxis::eta_z:
      s.layout = scale_layout(preset.layout, value, 1.0, 0.0);
      return s;
    case SweepAxis::eta_t:
      s.layout = scale_layout(preset.layout, 1.0, value, 0.0);
      return s;
    case SweepAxis::gap_g:
      s.layout = scale_layout(preset.layout, 1.0, 1.0, value);
      return s;
    case SweepAxis::eps_core_global:
      for (auto& w : wgs) w.eps_core = {value, w.eps_core.imag()};
      break;
    case SweepAxis::eps3_real:
      if (wgs.size() <= kD3) throw ValidationError("layout has no D3");
      wgs[kD3].eps_core = {value, wgs[kD3].eps_core.imag()};
      break;
    case SweepAxis::eps3_imag:
      if (wgs.size() <= kD3) throw ValidationError("layout has no D3");
      wgs[kD3].eps_core = {wgs[kD3].eps_core.real(), value};
      break;
  }
  validate_layout(s.layout);
  return s;
}

SweepRow sweep_row(const Preset& preset, SweepAxis axis, double value, std::string_view port) {
  SweepRow row;
  row.axis_value = value;
  row.port = std::string(port);
  try {
    const auto sample = apply_axis(preset, axis, value);
    const auto run = simulate_port(preset, sample.layout, sample.wavelength_um, port);
    const auto& t = run.transmission;
    row.fractions = t.port_fraction;
    row.total = t.total_fraction;
    row.substrate = t.substrate_fraction;
    row.contrast_db = t.contrast_db;
    row.n_ref = run.result.n_ref;
  } catch (const ValidationError& e) {
    row.valid = false;
    row.reason = e.what();
  } catch (const DomainError& e) {
    row.valid = false;
    row.reason = e.what();
  } catch (const NumericalError& e) {
    row.valid = false;
    row.reason = e.what();
  }
  return row;
}

std::vector<SweepRow> SweepResult::port_rows(std::string_view port) const {
  std::vector<SweepRow> out;
  for (const auto& r : rows)
    if (r.port == port) out.push_back(r);
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

SweepResult run_sweep(const Preset& preset, const SweepConfig& config) {
  SweepResult res;
  res.config = config;
  res.preset_hash = preset.hash;
  res.dx_um = preset.dx_um;
  res.dz_um = preset.dz_um;
  res.version = WGTRAP_VERSION;
  res.started_utc = utc_timestamp();

  auto ports = config.ports;
  for (const auto& p : ports) parse_port(p);
  std::sort(ports.begin(), ports.end(), [](const auto& a, const auto& b) { return port_rank(a) < port_rank(b); });
  ports.erase(std::unique(ports.begin(), ports.end()), ports.end());

  const auto values = config.range.values();
  struct Job {
    double value;
    std::string port;
  };
  std::vector<Job> jobs;
  for (double v : values)
    for (const auto& p : ports) jobs.push_back({v, p});
  res.rows.resize(jobs.size());

  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        res.rows[i] = sweep_row(preset, config.axis, jobs[i].value, jobs[i].port);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  res.finished_utc = utc_timestamp();
  return res;
}

SweepResult run_sweep(const SweepConfig& config) { return run_sweep(load_preset(config.preset_id), config); }

double ReciprocityReport::abs_mismatch_1() const { return std::abs(l1_to_r1 - r1_to_l1); }
double ReciprocityReport::abs_mismatch_2() const { return std::abs(l2_to_r1 - r1_to_l2); }
double ReciprocityReport::rel_mismatch_1() const { return relative(l1_to_r1, r1_to_l1); }
double ReciprocityReport::rel_mismatch_2() const { return relative(l2_to_r1, r1_to_l2); }

ReciprocityReport reciprocity_check(const Preset& preset, double wavelength_um) {
  auto go = [&](const char* port) {
    return std::async(std::launch::async, [&preset, wavelength_um, port] {
      return simulate_port(preset, preset.layout, wavelength_um, port).transmission;
    });
  };
  auto l1 = go("P_L1");
  auto l2 = go("P_L2");
  auto r1 = go("P_R1");
  const auto t_l1 = l1.get();
  const auto t_l2 = l2.get();
  const auto t_r1 = r1.get();

  ReciprocityReport rep;
  rep.preset_id = preset.id;
  rep.wavelength_um = wavelength_um;
  rep.l1_to_r1 = t_l1.port_fraction[kD1];
  rep.l2_to_r1 = t_l2.port_fraction[kD1];
  rep.r1_to_l1 = t_r1.port_fraction[kD1];
  rep.r1_to_l2 = t_r1.port_fraction[kD2];
  return rep;
}

ReciprocityReport reciprocity_check(std::string_view preset_id, double wavelength_um) {
  return reciprocity_check(load_preset(preset_id), wavelength_um);
}

SweepResult bandwidth_800(unsigned workers) {
  SweepConfig c;
  c.preset_id = "lrnr_800";
  c.axis = SweepAxis::wavelength;
  c.range = {0.70, 0.90, 21};
  c.ports = {"P_L1", "P_L2"};
  c.workers = workers;
  return run_sweep(c);
}

bool lrnr_signature(const SweepRow& from_l1, const SweepRow& from_l2) {
  for (const auto* r : {&from_l1, &from_l2}) {
    if (!r->valid || r->fractions.size() < 2) return false;
    const double d1 = r->fractions[kD1];
    const double d2 = r->fractions[kD2];
    if (d1 < kSignatureMinTrapped || d2 > kSignatureMaxResidue * d1) return false;
  }
  return true;
}

}  // namespace wgtrap
