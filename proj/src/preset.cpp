#include "wgtrap/preset.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "wgtrap/errors.hpp"

namespace wgtrap {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const json& need(const json& j, const char* key, std::string_view where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(fmt::format("{}: missing key '{}'", where, key));
  return j.at(key);
}

double number(const json& j, const char* key, std::string_view where) {
  const auto& v = need(j, key, where);
  if (!v.is_number()) throw ConfigError(fmt::format("{}: '{}' must be a number", where, key));
  return v.get<double>();
}

Piecewise parse_piecewise(const json& j, std::string_view where) {
  if (!j.is_array() || j.empty()) throw ConfigError(fmt::format("{}: expected a non-empty segment list", where));
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& s = j[i];
    const auto here = fmt::format("{}[{}]", where, i);
    const auto& z = need(s, "z", here);
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
      throw ConfigError(fmt::format("{}: 'z' must be [start, end]", here));
    Segment seg;
    seg.z_start = z[0].get<double>();
    seg.z_end = z[1].get<double>();
    if (s.contains("constant")) {
      seg.shape = Constant{number(s, "constant", here)};
    } else if (s.contains("sine_ramp")) {
      const auto& r = s.at("sine_ramp");
      const auto rw = here + ".sine_ramp";
      seg.shape = SineRamp{number(r, "base", rw), number(r, "amplitude", rw), number(r, "z_ref", rw),
                           number(r, "period", rw)};
    } else {
      throw ConfigError(fmt::format("{}: segment needs 'constant' or 'sine_ramp'", here));
    }
    segs.push_back(seg);
  }
  try {
    return Piecewise(std::move(segs));
  } catch (const ValidationError& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
}

cplx parse_eps(const json& j, std::string_view where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError(fmt::format("{}: permittivity must be a number or [re, im]", where));
}

void check_units(const json& root) {
  const auto& units = need(root, "units", "preset");
  const auto expect = [&](const char* key, const char* value) {
    const auto& u = need(units, key, "units");
    if (!u.is_string() || u.get<std::string>() != value)
      throw ConfigError(fmt::format("units.{} must be \"{}\"", key, value));
  };
  expect("length", "um");
  if (root.contains("cme")) {
    expect("rate", "1/mm");
    expect("cme_length", "mm");
  }
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

Preset parse_preset_json(std::string_view text, std::string source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(fmt::format("{}:{}:{}: JSON parse error: {}", source, line, col, e.what()));
  }
  if (!root.is_object()) throw ConfigError(fmt::format("{}: top level must be an object", source));

  try {
    check_units(root);
    Preset p;
    p.source = std::move(source);
    p.hash = sha256_hex(text);
    const auto& id = need(root, "id", "preset");
    if (!id.is_string()) throw ConfigError("preset: 'id' must be a string");
    p.id = id.get<std::string>();
    p.description = root.value("description", std::string{});
    p.wavelength_um = number(root, "wavelength_um", "preset");

    auto& lay = p.layout;
    lay.eps_substrate = number(root, "eps_substrate", "preset");
    lay.window_width = number(root, "window_width_um", "preset");
    lay.length = number(root, "length_um", "preset");

    const auto& grid = need(root, "grid", "preset");
    p.dx_um = number(grid, "dx_um", "grid");
    p.dz_um = number(grid, "dz_um", "grid");
    p.launch_waist_um = number(need(root, "launch", "preset"), "waist_um", "launch");

    const auto& wgs = need(root, "waveguides", "preset");
    if (!wgs.is_array()) throw ConfigError("preset: 'waveguides' must be a list");
    for (std::size_t i = 0; i < wgs.size(); ++i) {
      const auto& w = wgs[i];
      const auto where = fmt::format("waveguides[{}]", i);
      WaveguideSpec spec;
      spec.name = w.value("name", fmt::format("D{}", i + 1));
      spec.width = number(w, "width_um", where);
      spec.eps_core = parse_eps(need(w, "eps_core", where), where + ".eps_core");
      spec.center = parse_piecewise(need(w, "center_um", where), where + ".center_um");
      lay.waveguides.push_back(std::move(spec));
    }

    if (root.contains("cme")) {
      const auto& c = root.at("cme");
      CmeFit fit;
      fit.delta13 = number(c, "delta13", "cme");
      fit.delta23 = number(c, "delta23", "cme");
      fit.gamma = number(c, "gamma", "cme");
      fit.kappa13 = parse_piecewise(need(c, "kappa13", "cme"), "cme.kappa13");
      fit.kappa23 = parse_piecewise(need(c, "kappa23", "cme"), "cme.kappa23");
      p.cme = std::move(fit);
    }
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
}

Preset load_preset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_preset_json(ss.str(), path.string());
}

std::filesystem::path preset_directory() {
  if (const char* env = std::getenv("WGTRAP_PRESETS"); env && *env) return env;
  return WGTRAP_PRESET_DIR;
}

Preset load_preset(std::string_view id) {
  if (id.empty() || id.find('/') != std::string_view::npos || id.find("..") != std::string_view::npos)
    throw LookupError(fmt::format("invalid preset id '{}'", id));
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("WGTRAP_PRESETS"); env && *env) dirs.emplace_back(env);
  dirs.emplace_back(WGTRAP_PRESET_DIR);
  for (const auto& d : dirs) {
    const auto path = d / (std::string(id) + ".json");
    if (std::filesystem::is_regular_file(path)) return load_preset_file(path);
  }
  throw LookupError(fmt::format("unknown preset '{}'", id));
}

}  // namespace wgtrap
