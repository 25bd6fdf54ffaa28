#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(WGTRAP_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

fs::path scratch(const char* name) {
  const auto d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string kPreset = std::string(WGTRAP_SOURCE_DIR) + "/data/presets/lrnr_1550.json";

void write_variant(const fs::path& path, double d1_center) {
  auto j = nlohmann::json::parse(std::ifstream(kPreset));
  j["waveguides"][0]["center_um"] = {{{"z", {0, 4000}}, {"constant", d1_center}}};
  std::ofstream(path) << j.dump(2);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate passes the bundled preset") {
  const auto r = cli("validate " + kPreset);
  CHECK(r.status == 0);
  CHECK(r.out.find("all passed") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("validate names the overlapping cores") {
  const auto dir = scratch("wgtrap_cli_overlap");
  write_variant(dir / "overlap.json", 27.0);  // on top of D3
  const auto r = cli("validate " + (dir / "overlap.json").string());
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL cores_disjoint.D1_D3") != std::string::npos);
}

TEST_CASE("validate flags a core at the window edge") {
  const auto dir = scratch("wgtrap_cli_margin");
  write_variant(dir / "edge.json", 59.5);
  const auto r = cli("validate " + (dir / "edge.json").string());
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL D1.window_margin") != std::string::npos);
}

TEST_CASE("validate reports parse errors with their line") {
  const auto dir = scratch("wgtrap_cli_parse");
  std::ofstream(dir / "broken.json") << "{\n  \"id\": \"x\",\n  oops\n}\n";
  const auto r = cli("validate " + (dir / "broken.json").string());
  CHECK(r.status == 2);
  CHECK(r.out.find("broken.json:3:") != std::string::npos);
}

TEST_CASE("run with an unknown preset fails cleanly and writes nothing") {
  const auto dir = scratch("wgtrap_cli_missing");
  const auto r = cli("run --preset nope --out " + dir.string());
  CHECK(r.status == 2);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["error"] == "config error");
  CHECK(fs::is_empty(dir));
}

TEST_CASE("run writes traces, metadata and the transmission summary") {
  const auto dir = scratch("wgtrap_cli_run");
  const auto r = cli("run --preset lrnr_1550 --port P_L1 --engine both --dump-every 1000 --out " + dir.string());
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  const fs::path out = j["output_dir"].get<std::string>();
  for (const char* f : {"trace.csv", "core_power.csv", "run.json", "transmission.json", "cme_trace.csv", "cme.json",
                        "deviation.json", "snapshots/snapshot_000000.csv", "snapshots/snapshot_004000.csv"})
    CHECK_MESSAGE(fs::exists(out / f), f);
  const auto meta = nlohmann::json::parse(std::ifstream(out / "run.json"));
  CHECK(meta["preset_hash"].get<std::string>().size() == 64);
  CHECK(meta["grid"]["nx"] == 601);
  CHECK(meta.contains("n_ref"));
  std::ifstream trace(out / "trace.csv");
  std::string header;
  std::getline(trace, header);
  CHECK(header == "z_um,P1,P2,P3");
  std::ifstream snap(out / "snapshots/snapshot_001000.csv");
  std::getline(snap, header);
  CHECK(header == "x_um,re_psi,im_psi,intensity");
  CHECK(j["bpm"]["fractions"][0].get<double>() > 0.3);
}

TEST_CASE("the output root can come from the environment") {
  const auto dir = scratch("wgtrap_cli_env");
  const std::string cmd = "WGTRAP_OUT=" + dir.string() + " " + WGTRAP_CLI_PATH +
                          " run --preset lrnr_1550 --port P_L2 --engine cme > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK_FALSE(fs::is_empty(dir));
}

TEST_CASE("modes prints one csv row per width and wavelength") {
  const auto r = cli("modes --width 2 4 --wavelength 1.55 0.8");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("width_um,wavelength_um,n_eff,beta_per_um,confinement\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
  CHECK(r.out.find("2,1.55,3.271105312") != std::string::npos);
}

TEST_CASE("sweep writes csv and sidecar") {
  const auto dir = scratch("wgtrap_cli_sweep");
  std::ofstream(dir / "s.json") << R"({"preset": "lrnr_1550", "axis": "eps3_imag", "units": {"axis": "eps0"},
    "range": {"start": -0.01, "stop": -0.005, "count": 2}, "ports": ["P_L2"]})";
  const auto r = cli("sweep " + (dir / "s.json").string() + " --out " + dir.string());
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"] == 2);
  CHECK(fs::exists(j["csv"].get<std::string>()));
}

TEST_CASE("reciprocity subcommand") {
  const auto r = cli("reciprocity --preset lrnr_1550");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rel_mismatch_1"].get<double>() < 0.01);
  CHECK(j["rel_mismatch_2"].get<double>() < 0.01);
}

TEST_CASE("bad arguments") {
  CHECK(cli("run --engine warp").status != 0);
  CHECK(cli("").status != 0);
}

}
