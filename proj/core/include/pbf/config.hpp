#pragma once

#include <map>

#include "pbf/shape.hpp"

namespace pbf {

/// Unit conventions for the `physical` input mode: lengths in nanometers,
/// energies in kT at 298.15 K, charges in elementary units, concentrations in
/// mol/L.  Internally every charge-like quantity carries the factor
/// 4 pi * (vacuum Bjerrum length / nm) so the field equations keep their
/// plain form with beta = 1.
constexpr double kVacuumBjerrumNm = 56.046;
constexpr double kChargeScale = 4.0 * 3.14159265358979323846 * kVacuumBjerrumNm;
constexpr double kMolarPerNm3 = 0.602214076;

struct RunConfig {
  // [grid]
  int nodes = 64;
  Vec3 box_lo{0, 0, 0};
  Vec3 box_hi{8, 8, 8};

  // [geometry]
  std::vector<std::array<double, 4>> spheres;  // cx cy cz radius

  // [dielectric]
  double eps_minus = 1.0;
  double eps_plus = 80.0;

  // [charges]  x y z Q
  std::vector<std::array<double, 4>> charges;

  // [ions]
  bool physical_units = true;
  std::vector<std::array<double, 2>> ions;  // valence, concentration

  // [boundary]
  std::string trace_kind = "zero";  // zero | constant | linear_z
  double trace_value = 0.0;

  // [solver]
  SolveParams params;
  int threads = 0;  // 0 = hardware default

  // [output]
  std::string out_dir = "out";

  // [validate]
  std::string velocity_kind = "radial_bump";  // radial_bump | one_lobe | tangential
  double v_amplitude = 1.0;
  double v_width = 1.0;
  Vec3 lobe_point{0, 0, 0};
  double lobe_radius = 1.0;
  std::vector<double> t_values{0.02, 0.01};
  double fd_tolerance = 0.05;
};

/// Parses the INI-style config.  Errors carry the offending line number.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

GridSpec make_grid(const RunConfig& c);
LevelSet make_levelset(const RunConfig& c);
SolvationSystem make_system(const RunConfig& c);
VelocityField make_velocity(const RunConfig& c, const LevelSet& ls);

}  // namespace pbf
