#pragma once

#include <cstdint>
#include <vector>

#include "synapse/dressed.hpp"
#include "synapse/isosurface.hpp"

namespace synapse {

struct RadialRange {
  double r_min = 0.0;  // m
  double r_max = 0.0;  // m
  int coarse_samples = 128;
  double tolerance = 1e-12;  // m
};

struct RadialMinimum {
  double radius = 0.0;
  Vec3 position = Vec3::Zero();
  PotentialSample sample;
};

/// Minimizes U along the ray leaving `wire`'s axis at (azimuth, axial): a
/// coarse scan finds the lowest interior sample, Brent refines it. Fenced
/// samples count as +inf. Throws Error(NotFound) when the lowest sample sits
/// on the range boundary.
RadialMinimum radial_trap_minimum(const DressedParams& params, const WireAssembly& assembly,
                                  int wire, double azimuth, double axial, const RadialRange& range);

struct AxialRange {
  double lo = 0.0;
  double hi = 0.0;
  int samples = 1;

  std::vector<double> values() const;
};

/// Radial trap minima over an (azimuth x axial) grid; azimuth is the fastest
/// index. Cells where no minimum was found have found = 0 and NaN radius.
struct MinimumSurface {
  int wire = 0;
  std::vector<double> azimuths;
  std::vector<double> axials;
  std::vector<double> radius;
  std::vector<Vec3> positions;
  std::vector<double> U;
  std::vector<std::uint8_t> found;

  std::size_t index(std::size_t azimuth, std::size_t axial) const {
    return axial * azimuths.size() + azimuth;
  }
  std::size_t not_found() const;
  /// Quads between neighbouring found cells, split into triangles; azimuth wraps.
  TriangleMesh to_mesh() const;
};

MinimumSurface minimum_surface(const DressedParams& params, const WireAssembly& assembly,
                               int wire, int azimuth_samples, const AxialRange& axial,
                               const RadialRange& range, int workers = 0);

/// Resonance radius of a single wire in isolation: mu0 |iDC| / (2 pi B_res).
double resonance_radius(const DressedParams& params, const Wire& wire);

}  // namespace synapse
