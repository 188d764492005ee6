#include "pbf/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pbf {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s:%d: %s", origin.c_str(), line, msg.c_str());
  throw ConfigError(buf);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> numbers(const std::string& origin, int line, const std::string& value,
                            std::size_t expect = 0) {
  std::vector<double> out;
  std::istringstream is(value);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail(origin, line, "not a number: '" + tok + "'");
    }
  }
  if (expect && out.size() != expect) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "expected %zu numbers, got %zu", expect, out.size());
    fail(origin, line, buf);
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig c;
  c.t_values.clear();
  bool ions_cleared = false;
  std::istringstream is(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    std::size_t cpos = s.find_first_of(";#");
    if (cpos != std::string::npos) s = s.substr(0, cpos);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(origin, line, "empty key");
    if (value.empty()) fail(origin, line, "empty value for key '" + key + "'");

    auto num1 = [&]() { return numbers(origin, line, value, 1)[0]; };

    if (section == "grid") {
      if (key == "nodes") {
        c.nodes = int(num1());
        if (c.nodes < 8) fail(origin, line, "grid needs at least 8 nodes per axis");
      } else if (key == "box") {
        auto v = numbers(origin, line, value, 6);
        c.box_lo = {v[0], v[1], v[2]};
        c.box_hi = {v[3], v[4], v[5]};
      } else {
        fail(origin, line, "unknown [grid] key '" + key + "'");
      }
    } else if (section == "geometry") {
      if (key == "sphere") {
        auto v = numbers(origin, line, value, 4);
        c.spheres.push_back({v[0], v[1], v[2], v[3]});
      } else {
        fail(origin, line, "unknown [geometry] key '" + key + "'");
      }
    } else if (section == "dielectric") {
      if (key == "eps_minus")
        c.eps_minus = num1();
      else if (key == "eps_plus")
        c.eps_plus = num1();
      else
        fail(origin, line, "unknown [dielectric] key '" + key + "'");
    } else if (section == "charges") {
      if (key == "charge") {
        auto v = numbers(origin, line, value, 4);
        c.charges.push_back({v[0], v[1], v[2], v[3]});
      } else {
        fail(origin, line, "unknown [charges] key '" + key + "'");
      }
    } else if (section == "ions") {
      if (key == "units") {
        if (value == "physical")
          c.physical_units = true;
        else if (value == "reduced")
          c.physical_units = false;
        else
          fail(origin, line, "units must be 'physical' or 'reduced'");
      } else if (key == "ion") {
        if (!ions_cleared) {
          c.ions.clear();
          ions_cleared = true;
        }
        auto v = numbers(origin, line, value, 2);
        c.ions.push_back({v[0], v[1]});
      } else {
        fail(origin, line, "unknown [ions] key '" + key + "'");
      }
    } else if (section == "boundary") {
      if (key == "trace") {
        std::istringstream vs(value);
        std::string kind;
        vs >> kind;
        if (kind == "zero") {
          c.trace_kind = "zero";
        } else if (kind == "constant" || kind == "linear_z") {
          c.trace_kind = kind;
          std::string amt;
          if (!(vs >> amt)) fail(origin, line, "trace '" + kind + "' needs a value");
          c.trace_value = numbers(origin, line, amt, 1)[0];
        } else {
          fail(origin, line, "unknown trace kind '" + kind + "'");
        }
      } else {
        fail(origin, line, "unknown [boundary] key '" + key + "'");
      }
    } else if (section == "solver") {
      if (key == "newton_tol")
        c.params.newton_tol = num1();
      else if (key == "max_newton")
        c.params.max_newton = int(num1());
      else if (key == "cg_tol")
        c.params.cg_tol = num1();
      else if (key == "cg_max_iter")
        c.params.cg_max_iter = int(num1());
      else if (key == "threads")
        c.threads = int(num1());
      else
        fail(origin, line, "unknown [solver] key '" + key + "'");
    } else if (section == "output") {
      if (key == "dir")
        c.out_dir = value;
      else
        fail(origin, line, "unknown [output] key '" + key + "'");
    } else if (section == "validate") {
      if (key == "velocity") {
        if (value != "radial_bump" && value != "one_lobe" && value != "tangential")
          fail(origin, line, "unknown velocity kind '" + value + "'");
        c.velocity_kind = value;
      } else if (key == "amplitude")
        c.v_amplitude = num1();
      else if (key == "width")
        c.v_width = num1();
      else if (key == "lobe_point") {
        auto v = numbers(origin, line, value, 3);
        c.lobe_point = {v[0], v[1], v[2]};
      } else if (key == "lobe_radius")
        c.lobe_radius = num1();
      else if (key == "t_values")
        c.t_values = numbers(origin, line, value);
      else if (key == "fd_tolerance")
        c.fd_tolerance = num1();
      else
        fail(origin, line, "unknown [validate] key '" + key + "'");
    } else if (section.empty()) {
      fail(origin, line, "key outside any section");
    } else {
      fail(origin, line, "unknown section [" + section + "]");
    }
  }

  if (c.spheres.empty()) throw ConfigError(origin + ": [geometry] needs at least one sphere");
  if (c.charges.empty()) throw ConfigError(origin + ": [charges] needs at least one charge");
  if (c.t_values.empty()) c.t_values = {0.02, 0.01};
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), path);
}

GridSpec make_grid(const RunConfig& c) {
  return GridSpec(c.box_lo, c.box_hi, {c.nodes, c.nodes, c.nodes});
}

LevelSet make_levelset(const RunConfig& c) {
  GridSpec g = make_grid(c);
  LevelSet ls = levelset_sphere({c.spheres[0][0], c.spheres[0][1], c.spheres[0][2]},
                                c.spheres[0][3], g);
  for (std::size_t i = 1; i < c.spheres.size(); ++i) {
    LevelSet next = levelset_sphere({c.spheres[i][0], c.spheres[i][1], c.spheres[i][2]},
                                    c.spheres[i][3], g);
    ls = levelset_union(ls, next);
  }
  return ls;
}

SolvationSystem make_system(const RunConfig& c) {
  SolvationSystem sys;
  sys.eps_minus = c.eps_minus;
  sys.eps_plus = c.eps_plus;
  const double qscale = c.physical_units ? kChargeScale : 1.0;
  for (const auto& q : c.charges)
    sys.charges.charges.push_back({{q[0], q[1], q[2]}, q[3] * qscale});
  if (!c.ions.empty()) {
    std::vector<IonicSpecies> species;
    const double cscale = c.physical_units ? kMolarPerNm3 * kChargeScale : 1.0;
    for (const auto& ion : c.ions) species.push_back({ion[0], ion[1] * cscale});
    sys.ions = IonModel(std::move(species), 1.0);
  }
  GridSpec g = make_grid(c);
  if (c.trace_kind == "zero")
    sys.boundary = zero_trace();
  else if (c.trace_kind == "constant")
    sys.boundary = constant_trace(c.trace_value);
  else if (c.trace_kind == "linear_z")
    sys.boundary = linear_trace(2, c.trace_value, g);
  else
    throw ConfigError("unknown boundary trace kind: " + c.trace_kind);
  validate_system(sys);
  return sys;
}

VelocityField make_velocity(const RunConfig& c, const LevelSet& ls) {
  const auto& s0 = c.spheres[0];
  if (c.velocity_kind == "radial_bump")
    return make_radial_bump({s0[0], s0[1], s0[2]}, s0[3], c.v_width, c.v_amplitude);
  if (c.velocity_kind == "one_lobe")
    return make_one_lobe_bump({s0[0], s0[1], s0[2]}, s0[3], c.v_width, c.v_amplitude,
                              c.lobe_point, c.lobe_radius);
  if (c.velocity_kind == "tangential")
    return make_tangential_field(ls, c.v_width, NormalExtension::NodeGradient);
  throw ConfigError("unknown velocity kind: " + c.velocity_kind);
}

}  // namespace pbf
