#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "wgtrap/errors.hpp"
#include "wgtrap/output.hpp"
#include "wgtrap/sweep.hpp"

using namespace wgtrap;

namespace {

// The 1550 design compressed 4x in z keeps sweeps fast.
Preset short_preset() {
  auto p = load_preset("lrnr_1550");
  p.layout = scale_layout(p.layout, 0.25, 1.0, 0.0);
  return p;
}

bool same_row(const SweepRow& a, const SweepRow& b) {
  return a.axis_value == b.axis_value && a.port == b.port && a.valid == b.valid && a.fractions == b.fractions &&
         a.total == b.total && a.contrast_db == b.contrast_db && a.n_ref == b.n_ref;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("range values include both ends") {
  const auto v = SweepRange{0.96, 1.06, 21}.values();
  CHECK(v.size() == 21);
  CHECK(v.front() == 0.96);
  CHECK(v.back() == 1.06);
  CHECK(v[10] == doctest::Approx(1.01));
  CHECK_THROWS_AS((SweepRange{0, 1, 1}.values()), ConfigError);
}

TEST_CASE("axis names round trip") {
  for (auto a : {SweepAxis::wavelength, SweepAxis::eta_z, SweepAxis::eta_t, SweepAxis::gap_g,
                 SweepAxis::eps_core_global, SweepAxis::eps3_real, SweepAxis::eps3_imag})
    CHECK(parse_axis(axis_name(a)) == a);
  CHECK_THROWS_AS(parse_axis("length"), ConfigError);
}

TEST_CASE("config parsing") {
  const auto c = parse_sweep_config(
      R"({"preset": "lrnr_1550", "axis": "eta_t", "range": {"start": 0.96, "stop": 1.06, "count": 21},
          "ports": ["P_L1", "P_L2"], "workers": 2})");
  CHECK(c.axis == SweepAxis::eta_t);
  CHECK(c.range.count == 21);
  CHECK(c.workers == 2);
  CHECK_THROWS_AS(parse_sweep_config(R"({"preset": "x", "axis": "eta_t", "range": {"start": 1, "stop": 2, "count": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_sweep_config(R"({"preset": "x", "axis": "eta_t", "range": {"start": 1, "stop": 2, "count": 3},
                                        "ports": ["P_R2"]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_sweep_config("{\"preset\": "), ConfigError);
}

TEST_CASE("bundled sweep configs parse") {
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(WGTRAP_SOURCE_DIR) / "data/sweeps")) {
    CAPTURE(e.path().string());
    const auto c = load_sweep_config(e.path().string());
    CHECK_NOTHROW(load_preset(c.preset_id));
  }
}

TEST_CASE("rows are ordered, counted and bounded") {
  SweepConfig c;
  c.axis = SweepAxis::eps3_imag;
  c.range = {0.0, -0.01, 3};
  c.ports = {"P_L2", "P_L1"};
  c.workers = 2;
  const auto r = run_sweep(short_preset(), c);
  REQUIRE(r.rows.size() == 6);
  CHECK(r.rows[0].port == "P_L1");
  CHECK(r.rows[1].port == "P_L2");
  CHECK(r.rows[0].axis_value == 0.0);
  CHECK(r.rows[5].axis_value == -0.01);
  for (const auto& row : r.rows) {
    CHECK(row.valid);
    for (double f : row.fractions) {
      CHECK(f >= 0.0);
      CHECK(f <= 1.0 + 1e-6);
    }
  }
  CHECK(r.port_rows("P_L2").size() == 3);
}

TEST_CASE("rows do not depend on scheduling or on the rest of the sweep") {
  const auto p = short_preset();
  SweepConfig c;
  c.axis = SweepAxis::eta_t;
  c.range = {0.98, 1.02, 3};
  c.ports = {"P_L1", "P_L2"};
  c.workers = 1;
  const auto serial = run_sweep(p, c);
  c.workers = 3;
  const auto parallel = run_sweep(p, c);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) CHECK(same_row(serial.rows[i], parallel.rows[i]));
  const auto alone = sweep_row(p, SweepAxis::eta_t, serial.rows[3].axis_value, serial.rows[3].port);
  CHECK(same_row(alone, serial.rows[3]));
}

TEST_CASE("the identity sample reproduces a plain run") {
  const auto p = short_preset();
  for (auto axis : {SweepAxis::eta_z, SweepAxis::gap_g, SweepAxis::eps3_imag}) {
    const double identity = axis == SweepAxis::eta_z ? 1.0 : axis == SweepAxis::gap_g ? 0.0 : -0.01;
    const auto row = sweep_row(p, axis, identity, "P_L2");
    const auto run = simulate_port(p, "P_L2");
    CHECK(row.fractions == run.transmission.port_fraction);
    CHECK(row.contrast_db == run.transmission.contrast_db);
  }
  SweepConfig c;
  c.axis = SweepAxis::wavelength;
  c.range = {1.50, 1.60, 3};
  c.ports = {"P_L1"};
  const auto r = run_sweep(p, c);
  CHECK(r.rows[1].axis_value == 1.55);
  CHECK(r.rows[1].fractions == simulate_port(p, "P_L1").transmission.port_fraction);
}

TEST_CASE("invalid samples are annotated and the sweep continues") {
  SweepConfig c;
  c.axis = SweepAxis::gap_g;
  c.range = {0.0, -4.0, 2};
  c.ports = {"P_L1"};
  const auto r = run_sweep(short_preset(), c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].valid);
  CHECK_FALSE(r.rows[1].valid);
  CHECK(r.rows[1].reason.find("cores_disjoint") != std::string::npos);
}

TEST_CASE("sweep files: csv named by preset, axis and timestamp plus a json sidecar") {
  SweepConfig c;
  c.preset_id = "lrnr_1550";
  c.axis = SweepAxis::eps3_real;
  c.range = {10.76, 10.77, 2};
  c.ports = {"P_L1"};
  const auto r = run_sweep(short_preset(), c);
  const auto dir = std::filesystem::temp_directory_path() / "wgtrap_sweep_test";
  std::filesystem::remove_all(dir);
  const auto csv = write_sweep(dir, r);
  CHECK(std::regex_match(csv.filename().string(), std::regex(R"(lrnr_1550_eps3_real_\d{8}T\d{6}Z\.csv)")));
  std::ifstream in(csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header.rfind("axis,value,port,valid,P1,P2,P3", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
  auto sidecar = csv;
  sidecar.replace_extension(".json");
  CHECK(std::filesystem::exists(sidecar));
  std::filesystem::remove_all(dir);
}

TEST_CASE("reciprocity of a symmetric z-invariant coupler is exact") {
  Preset p;
  p.id = "sym";
  p.layout.eps_substrate = 10.56;
  p.layout.window_width = 60.0;
  p.layout.length = 800.0;
  p.layout.waveguides.push_back({"D1", Trajectory::constant(26.0, 0, 800), 2.0, {10.76, 0.0}});
  p.layout.waveguides.push_back({"D2", Trajectory::constant(34.0, 0, 800), 2.0, {10.76, 0.0}});
  p.layout.waveguides.push_back({"D3", Trajectory::constant(30.0, 0, 800), 4.0, {10.76, -0.01}});
  const auto r = reciprocity_check(p, 1.55);
  CHECK(r.abs_mismatch_1() < 1e-6);
  CHECK(r.abs_mismatch_2() < 1e-6);
}

TEST_CASE("reciprocity of the 1550 design") {
  const auto r = reciprocity_check("lrnr_1550", 1.55);
  CHECK(r.rel_mismatch_1() < 0.01);
  CHECK(r.rel_mismatch_2() < 0.01);
}

TEST_CASE("signature predicate") {
  SweepRow a, b;
  a.fractions = {0.4, 1e-4, 0.0};
  b.fractions = {0.2, 1e-4, 0.0};
  CHECK(lrnr_signature(a, b));
  b.fractions = {0.2, 0.05, 0.0};
  CHECK_FALSE(lrnr_signature(a, b));
  b.fractions = {0.05, 0.0, 0.0};
  CHECK_FALSE(lrnr_signature(a, b));
  b = a;
  b.valid = false;
  CHECK_FALSE(lrnr_signature(a, b));
}

}
