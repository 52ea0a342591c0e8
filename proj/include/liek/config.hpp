#pragma once

#include "liek/geometry.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace liek {

// Run configuration shared by the CLI and the verification suite. Two
// equivalent surfaces: a small block text format and JSON with the same keys.
//
//   geometry { kind = circle  n = 128  window = 10  scattering_c = 1 }
//   symbol = jbracket_pow:2
//   cutoff { r = 1  profile = smooth }
//   quantize { density_correction = true }
//   flow { tol = 1e-10 }
//   suspended { z_period = 8  n_z = 16 }
//   semiclassical { t_ladder = [1, 0.5, 0.25, 0.125] }
//   suite = [identity, vector_field]
//   tolerances { identity = 1e-6 }
//   out = reports
//   seed = 12345
//
// Unknown keys are rejected with the offending key in the error message.
struct RunConfig {
  ModelKind kind = ModelKind::Circle;
  int n = 128;
  double window = 10.0;
  double scattering_c = 1.0;

  std::string symbol = "one";
  double cutoff_r = -1.0;  // negative: model default min(r0/2, 1)
  std::string cutoff_profile = "smooth";
  bool density_correction = true;
  double flow_tol = 1e-10;

  double suspended_z_period = 8.0;
  int suspended_n_z = 16;
  std::vector<double> semiclassical_t_ladder = {1.0, 0.5, 0.25, 0.125};

  // Check selection; the name "default" expands to the full registry and an
  // explicitly empty list selects nothing.
  std::vector<std::string> suite = {"default"};
  std::map<std::string, double> tolerances;

  std::string out_dir = "reports";
  uint64_t seed = 12345;

  GeometryPtr make_geometry() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_json(const std::string& text);

// Reads a file and dispatches on the leading non-space character ('{' means
// JSON).
RunConfig parse_config_file(const std::string& path);

// Canonical block text form; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace liek
