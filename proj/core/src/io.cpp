#include "pbf/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace pbf {

namespace {
constexpr char kMagic[8] = {'P', 'B', 'F', 'G', 'R', 'D', '0', '1'};
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_binary(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("write_grid_binary: cannot open " + path);
  os.write(kMagic, sizeof kMagic);
  std::int64_t dims[3] = {f.grid.n[0], f.grid.n[1], f.grid.n[2]};
  os.write(reinterpret_cast<const char*>(dims), sizeof dims);
  double bounds[6] = {f.grid.lo[0], f.grid.lo[1], f.grid.lo[2],
                      f.grid.hi[0], f.grid.hi[1], f.grid.hi[2]};
  os.write(reinterpret_cast<const char*>(bounds), sizeof bounds);
  os.write(reinterpret_cast<const char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
  if (!os) throw Error("write_grid_binary: short write to " + path);
}

ScalarField read_grid_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_grid_binary: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error("read_grid_binary: bad magic in " + path);
  std::int64_t dims[3];
  double bounds[6];
  is.read(reinterpret_cast<char*>(dims), sizeof dims);
  is.read(reinterpret_cast<char*>(bounds), sizeof bounds);
  if (!is) throw Error("read_grid_binary: truncated header in " + path);
  GridSpec g({bounds[0], bounds[1], bounds[2]}, {bounds[3], bounds[4], bounds[5]},
             {int(dims[0]), int(dims[1]), int(dims[2])});
  ScalarField f(g);
  is.read(reinterpret_cast<char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
  if (!is) throw Error("read_grid_binary: truncated data in " + path);
  return f;
}

void write_vtk_scalar(const std::string& path, const ScalarField& f, const std::string& name) {
  std::ofstream os(path);
  if (!os) throw Error("write_vtk_scalar: cannot open " + path);
  const GridSpec& g = f.grid;
  os << "# vtk DataFile Version 3.0\n"
     << name << "\nASCII\nDATASET STRUCTURED_POINTS\n"
     << "DIMENSIONS " << g.n[0] << ' ' << g.n[1] << ' ' << g.n[2] << '\n'
     << "ORIGIN " << g17(g.lo[0]) << ' ' << g17(g.lo[1]) << ' ' << g17(g.lo[2]) << '\n'
     << "SPACING " << g17(g.h(0)) << ' ' << g17(g.h(1)) << ' ' << g17(g.h(2)) << '\n'
     << "POINT_DATA " << f.v.size() << '\n'
     << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : f.v) os << g17(v) << '\n';
}

void write_vtk_interface(
    const std::string& path, const SurfaceTraces& traces,
    const std::vector<std::pair<std::string, const std::vector<double>*>>& channels) {
  std::ofstream os(path);
  if (!os) throw Error("write_vtk_interface: cannot open " + path);
  const std::size_t n = traces.rows.size();
  os << "# vtk DataFile Version 3.0\ninterface samples\nASCII\nDATASET POLYDATA\n"
     << "POINTS " << n << " double\n";
  for (const auto& r : traces.rows)
    os << g17(r.point[0]) << ' ' << g17(r.point[1]) << ' ' << g17(r.point[2]) << '\n';
  os << "POINT_DATA " << n << "\nNORMALS normals double\n";
  for (const auto& r : traces.rows)
    os << g17(r.normal[0]) << ' ' << g17(r.normal[1]) << ' ' << g17(r.normal[2]) << '\n';
  for (const auto& [name, data] : channels) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : *data) os << g17(v) << '\n';
  }
}

void write_csv_line_profile(const std::string& path, const ScalarField& f, int axis,
                            const Vec3& through) {
  std::ofstream os(path);
  if (!os) throw Error("write_csv_line_profile: cannot open " + path);
  const GridSpec& g = f.grid;
  os << "# line profile axis=" << axis << "\ncoordinate,value\n";
  for (int m = 0; m < g.n[axis]; ++m) {
    Vec3 x = through;
    x[axis] = g.lo[axis] + m * g.h(axis);
    os << g17(x[axis]) << ',' << g17(f.interp(x)) << '\n';
  }
}

}  // namespace pbf
