#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "wgtrap/geometry.hpp"

namespace wgtrap {

// Fitted coupled-mode parameters shipped with a preset. Rates in 1/mm,
// schedules over z in mm.
struct CmeFit {
  double delta13 = 0.0;
  double delta23 = 0.0;
  double gamma = 0.0;
  CouplingSchedule kappa13;
  CouplingSchedule kappa23;
  bool operator==(const CmeFit&) const = default;
};

struct Preset {
  std::string id;
  std::string description;
  LayoutSpec layout;
  double wavelength_um = 1.55;
  double dx_um = 0.1;
  double dz_um = 1.0;
  double launch_waist_um = 1.0;
  std::optional<CmeFit> cme;
  std::string source;  // file path or "<inline>"
  std::string hash;    // sha256 of the raw JSON text, hex
};

// Parses the JSON preset format. Structural problems (syntax, missing keys,
// wrong units) throw ConfigError with line/column context; physical
// invariants are left to check_layout so `validate` can report them all.
Preset parse_preset_json(std::string_view text, std::string source = "<inline>");
Preset load_preset_file(const std::filesystem::path& path);

// Looks up <id>.json in $WGTRAP_PRESETS, then in the bundled preset
// directory. Unknown ids throw LookupError.
Preset load_preset(std::string_view id);
std::filesystem::path preset_directory();

std::string sha256_hex(std::string_view bytes);

}  // namespace wgtrap
