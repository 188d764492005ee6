#pragma once

#include <ostream>
#include <string>

#include "pbf/force.hpp"

namespace pbf {

/// 17-significant-digit text form, round-trip safe.
std::string g17(double v);

/// Flat binary grid file: 8-byte magic, int64 dims, f64 bounds, then node
/// values as little-endian 64-bit floats.
void write_grid_binary(const std::string& path, const ScalarField& f);
ScalarField read_grid_binary(const std::string& path);

/// Legacy-VTK structured points (ASCII) for inspection.
void write_vtk_scalar(const std::string& path, const ScalarField& f, const std::string& name);

/// Interface samples with per-sample scalar channels as VTK polydata.
void write_vtk_interface(const std::string& path, const SurfaceTraces& traces,
                         const std::vector<std::pair<std::string, const std::vector<double>*>>& channels);

/// CSV line profile of a field along one axis through a given point.
void write_csv_line_profile(const std::string& path, const ScalarField& f, int axis,
                            const Vec3& through);

}  // namespace pbf
