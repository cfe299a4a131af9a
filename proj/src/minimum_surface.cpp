#include "synapse/minimum_surface.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "synapse/error.hpp"
#include "synapse/optimize.hpp"
#include "synapse/parallel.hpp"

namespace synapse {

double resonance_radius(const DressedParams& params, const Wire& wire) {
  return PhysicalConstants::mu0 * std::abs(wire.idc) / (2.0 * std::numbers::pi * params.resonance_field());
}

RadialMinimum radial_trap_minimum(const DressedParams& params, const WireAssembly& assembly,
                                  int wire, double azimuth, double axial, const RadialRange& range) {
  if (wire < 0 || wire >= static_cast<int>(assembly.wires.size())) {
    throw Error(ErrorCode::InvalidArgument, "wire index out of range");
  }
  if (!(range.r_min > 0.0 && range.r_max > range.r_min) || range.coarse_samples < 3) {
    throw Error(ErrorCode::InvalidArgument, "radial search range must satisfy 0 < r_min < r_max");
  }
  if (range.r_min <= assembly.tolerances.exclusion_radius) {
    throw Error(ErrorCode::InvalidArgument, "radial search range reaches into the wire fence");
  }
  const WireFrame frame = wire_frame(assembly.wires[wire].geometry, axial);
  const auto energy = [&](double r) {
    try {
      return potential_value(params, assembly, frame.at(azimuth, r));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Singularity || e.code() == ErrorCode::QuantizationAxis) {
        return std::numeric_limits<double>::infinity();
      }
      throw;
    }
  };

  const int n = range.coarse_samples;
  const double step = (range.r_max - range.r_min) / (n - 1);
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double u = energy(range.r_min + i * step);
    if (u < best_value) {
      best_value = u;
      best = i;
    }
  }
  if (best <= 0 || best >= n - 1) {
    throw Error(ErrorCode::NotFound, "no interior potential minimum along the radial ray");
  }
  const LineMinimum m = brent_minimize(energy, range.r_min + (best - 1) * step,
                                       range.r_min + (best + 1) * step, range.tolerance);
  RadialMinimum result;
  result.radius = m.x;
  result.position = frame.at(azimuth, m.x);
  result.sample = dressed_potential(params, assembly, result.position);
  return result;
}

std::vector<double> AxialRange::values() const {
  std::vector<double> v;
  if (samples <= 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < samples; ++i) v.push_back(lo + (hi - lo) * i / (samples - 1));
  return v;
}

std::size_t MinimumSurface::not_found() const {
  std::size_t n = 0;
  for (auto f : found) n += f == 0;
  return n;
}

TriangleMesh MinimumSurface::to_mesh() const {
  TriangleMesh mesh;
  std::vector<int> vertex(found.size(), -1);
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (!found[i]) continue;
    vertex[i] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(positions[i]);
  }
  const std::size_t na = azimuths.size();
  for (std::size_t x = 0; x + 1 < axials.size(); ++x) {
    for (std::size_t a = 0; a < na; ++a) {
      const std::size_t b = (a + 1) % na;
      if (na < 3 && b == 0) continue;
      const int v00 = vertex[index(a, x)], v10 = vertex[index(b, x)];
      const int v01 = vertex[index(a, x + 1)], v11 = vertex[index(b, x + 1)];
      if (v00 >= 0 && v10 >= 0 && v11 >= 0) mesh.triangles.push_back({v00, v10, v11});
      if (v00 >= 0 && v11 >= 0 && v01 >= 0) mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

MinimumSurface minimum_surface(const DressedParams& params, const WireAssembly& assembly,
                               int wire, int azimuth_samples, const AxialRange& axial,
                               const RadialRange& range, int workers) {
  if (azimuth_samples < 1) throw Error(ErrorCode::InvalidArgument, "need at least one azimuth");
  MinimumSurface s;
  s.wire = wire;
  for (int a = 0; a < azimuth_samples; ++a) {
    s.azimuths.push_back(2.0 * std::numbers::pi * a / azimuth_samples);
  }
  s.axials = axial.values();
  const std::size_t n = s.azimuths.size() * s.axials.size();
  s.radius.assign(n, std::numeric_limits<double>::quiet_NaN());
  s.positions.assign(n, Vec3::Constant(std::numeric_limits<double>::quiet_NaN()));
  s.U.assign(n, std::numeric_limits<double>::quiet_NaN());
  s.found.assign(n, 0);
  parallel_for(n, workers, [&](std::size_t id) {
    const std::size_t a = id % s.azimuths.size();
    const std::size_t x = id / s.azimuths.size();
    try {
      const RadialMinimum m = radial_trap_minimum(params, assembly, wire, s.azimuths[a], s.axials[x], range);
      s.radius[id] = m.radius;
      s.positions[id] = m.position;
      s.U[id] = m.sample.U;
      s.found[id] = 1;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotFound && e.code() != ErrorCode::QuantizationAxis &&
          e.code() != ErrorCode::Singularity) {
        throw;
      }
    }
  });
  return s;
}

}  // namespace synapse
