#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "synapse/biot_savart.hpp"
#include "synapse/model.hpp"
#include "synapse/types.hpp"

namespace synapse {

struct InfiniteLine {
  Vec3 point = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
  bool operator==(const InfiniteLine&) const = default;
};

struct Polyline {
  std::vector<Vec3> vertices;
  bool operator==(const Polyline&) const = default;
};

using WireGeometry = std::variant<InfiniteLine, Polyline>;

struct Wire {
  WireGeometry geometry = InfiniteLine{};
  double idc = 0.0;       // A, signed along the geometry's direction
  double irf = 0.0;       // A, amplitude
  double rf_phase = 0.0;  // rad

  void validate() const;
  bool operator==(const Wire&) const = default;
};

struct FieldTolerances {
  double exclusion_radius = 1e-9;  // m; points closer to a wire are out of domain
  double zero_threshold = 1e-8;    // T; below this |B_DC| has no quantization axis
  bool operator==(const FieldTolerances&) const = default;
};

struct WireAssembly {
  std::vector<Wire> wires;
  Vec3 bias = Vec3::Zero();  // T
  RFDrive drive;
  FieldTolerances tolerances;

  void validate() const;
  bool operator==(const WireAssembly&) const = default;
};

Vec3 field_infinite_wire(const InfiniteLine& line, double current, const Vec3& p,
                         double exclusion_radius = 1e-9);
Vec3 field_polyline(const Polyline& polyline, double current, const Vec3& p,
                    double exclusion_radius = 1e-9);

/// Field of one wire geometry; std::nullopt inside the exclusion radius.
std::optional<FieldJet> wire_field_jet(const WireGeometry& geometry, double current,
                                       const Vec3& p, double exclusion_radius);

/// Static field: bias plus every wire's DC contribution.
Vec3 b_dc(const WireAssembly& assembly, const Vec3& p);
FieldJet b_dc_jet(const WireAssembly& assembly, const Vec3& p);

/// Quasi-static RF amplitude vector (bias excluded). All RF-carrying wires must
/// share one phase; otherwise throws Error(Unsupported).
Vec3 b_rf_amplitude(const WireAssembly& assembly, const Vec3& p);
FieldJet b_rf_jet(const WireAssembly& assembly, const Vec3& p);

void require_in_phase(const WireAssembly& assembly);

/// Shortest distance from p to the conductor.
double distance_to_wire(const WireGeometry& geometry, const Vec3& p);

/// True when p is inside the exclusion radius of any wire.
bool inside_any_fence(const WireAssembly& assembly, const Vec3& p);

/// Local cylindrical frame around a wire: position on the axis at `axial`
/// (signed distance along the line from its point, or arc length along a
/// polyline), the tangent there, and two perpendicular unit vectors. Azimuth 0
/// points along e1, pi/2 along e2 = tangent x e1.
struct WireFrame {
  Vec3 origin;
  Vec3 tangent;
  Vec3 e1;
  Vec3 e2;

  Vec3 at(double azimuth, double radius) const;
};

WireFrame wire_frame(const WireGeometry& geometry, double axial);

/// Closest points between two wire axes (infinite lines only); for intersecting
/// lines both points coincide.
std::pair<Vec3, Vec3> closest_axis_points(const InfiniteLine& a, const InfiniteLine& b);

}  // namespace synapse
