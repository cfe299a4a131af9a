#pragma once

#include <array>
#include <vector>

#include "synapse/grid.hpp"

namespace synapse {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

struct IsoSurfaceMesh : TriangleMesh {
  double level = 0.0;
};

/// Marching cubes with linear edge interpolation. Cells with any masked corner
/// are skipped. Vertices are shared between cells and numbered in order of
/// first use during a k-j-i cell sweep, so output is reproducible. Throws
/// Error(EmptyMesh) when `level` is outside the open range of valid values or
/// no cell crosses it.
IsoSurfaceMesh extract_isosurface(const ScalarField3D& field, double level);

}  // namespace synapse
