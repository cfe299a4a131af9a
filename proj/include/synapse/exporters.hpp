#pragma once

#include <iosfwd>
#include <string>

#include "synapse/critical.hpp"
#include "synapse/dynamics.hpp"
#include "synapse/grid.hpp"
#include "synapse/isosurface.hpp"

namespace synapse {

// Text outputs print doubles in shortest round-trip form, so they are exact
// and byte-identical for identical inputs.

/// ASCII PLY; coordinates in metres.
void write_ply(std::ostream& out, const TriangleMesh& mesh, const std::string& comment = "");

/// "# ..." header lines (source, units), then x,y,z,value,mask; NaN values
/// are written as "nan".
void write_grid_csv(std::ostream& out, const ScalarField3D& field, const std::string& source,
                    const std::string& unit);

/// Little-endian binary block:
///   char[8]  "SYNGRID1"
///   int32    nx, ny, nz
///   float64  origin x, y, z [m]
///   float64  spacing x, y, z [m]
///   float64  values[nx ny nz]  (x fastest, NaN where masked)
///   uint8    mask[nx ny nz]
void write_grid_binary(std::ostream& out, const ScalarField3D& field);
ScalarField3D read_grid_binary(std::istream& in);

void write_sweep_csv(std::ostream& out, const SweepTable& table);

/// Columns t,x,y,z,vx,vy,vz,U,eta.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Physical unit of a scalar source / parameter / observable.
std::string unit_of(ScalarSource source);
std::string unit_of(const ParameterSelector& selector);
std::string unit_of(Observable observable);

}  // namespace synapse
