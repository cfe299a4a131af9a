#include "synapse/magnetostatics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "synapse/error.hpp"

namespace synapse {
namespace {

template <typename... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void throw_fenced(std::size_t index) {
  throw Error(ErrorCode::Singularity,
              "point lies within the exclusion radius of wire " + std::to_string(index));
}

enum class Channel { DC, RF };

FieldJet superpose(const WireAssembly& assembly, const Vec3& p, Channel channel) {
  FieldJet total{channel == Channel::DC ? assembly.bias : Vec3::Zero(), Mat3::Zero()};
  for (std::size_t i = 0; i < assembly.wires.size(); ++i) {
    const Wire& w = assembly.wires[i];
    const double current = channel == Channel::DC ? w.idc : w.irf;
    auto jet = wire_field_jet(w.geometry, current, p, assembly.tolerances.exclusion_radius);
    if (!jet) throw_fenced(i);
    total.value += jet->value;
    total.jacobian += jet->jacobian;
  }
  return total;
}

Vec3 perpendicular_unit(const Vec3& tangent) {
  Vec3 e1 = Vec3::UnitZ().cross(tangent);
  if (e1.norm() < 1e-8) e1 = Vec3::UnitX().cross(tangent);
  return e1.normalized();
}

}  // namespace

void Wire::validate() const {
  std::visit(Overloaded{
                 [](const InfiniteLine& line) {
                   if (!line.point.allFinite() || !line.direction.allFinite()) {
                     throw Error(ErrorCode::InvalidArgument, "wire line has non-finite components");
                   }
                   if (std::abs(line.direction.norm() - 1.0) > 1e-12) {
                     throw Error(ErrorCode::InvalidArgument, "wire direction must be a unit vector");
                   }
                 },
                 [](const Polyline& poly) {
                   if (poly.vertices.size() < 2) {
                     throw Error(ErrorCode::InvalidArgument, "polyline needs at least two vertices");
                   }
                   for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
                     if (!poly.vertices[i].allFinite()) {
                       throw Error(ErrorCode::InvalidArgument, "polyline vertex is not finite");
                     }
                     if (i > 0 && poly.vertices[i] == poly.vertices[i - 1]) {
                       throw Error(ErrorCode::InvalidArgument, "polyline repeats a consecutive vertex");
                     }
                   }
                 },
             },
             geometry);
  if (!std::isfinite(idc) || !std::isfinite(irf) || !std::isfinite(rf_phase)) {
    throw Error(ErrorCode::InvalidArgument, "wire currents and phase must be finite");
  }
  if (irf < 0.0) throw Error(ErrorCode::InvalidArgument, "RF current amplitude must be >= 0");
}

void WireAssembly::validate() const {
  if (wires.empty()) throw Error(ErrorCode::InvalidArgument, "assembly needs at least one wire");
  for (const auto& w : wires) w.validate();
  if (!bias.allFinite()) throw Error(ErrorCode::InvalidArgument, "bias must be finite");
  if (!(tolerances.exclusion_radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "exclusion radius must be positive");
  }
  if (!(tolerances.zero_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "zero threshold must be positive");
  }
}

Vec3 field_infinite_wire(const InfiniteLine& line, double current, const Vec3& p,
                         double exclusion_radius) {
  auto b = kernel::line_field<double>(line.point, line.direction, current, p, exclusion_radius);
  if (!b) throw_fenced(0);
  return *b;
}

Vec3 field_polyline(const Polyline& polyline, double current, const Vec3& p,
                    double exclusion_radius) {
  Vec3 total = Vec3::Zero();
  for (std::size_t s = 0; s + 1 < polyline.vertices.size(); ++s) {
    auto b = kernel::segment_field<double>(polyline.vertices[s], polyline.vertices[s + 1], current,
                                           p, exclusion_radius);
    if (!b) throw_fenced(0);
    total += *b;
  }
  return total;
}

std::optional<FieldJet> wire_field_jet(const WireGeometry& geometry, double current,
                                       const Vec3& p, double exclusion_radius) {
  return std::visit(
      Overloaded{
          [&](const InfiniteLine& line) {
            return kernel::line_field_jet<double>(line.point, line.direction, current, p,
                                                  exclusion_radius);
          },
          [&](const Polyline& poly) -> std::optional<FieldJet> {
            FieldJet total{Vec3::Zero(), Mat3::Zero()};
            for (std::size_t s = 0; s + 1 < poly.vertices.size(); ++s) {
              auto jet = kernel::segment_field_jet<double>(poly.vertices[s], poly.vertices[s + 1],
                                                           current, p, exclusion_radius);
              if (!jet) return std::nullopt;
              total.value += jet->value;
              total.jacobian += jet->jacobian;
            }
            return total;
          },
      },
      geometry);
}

Vec3 b_dc(const WireAssembly& assembly, const Vec3& p) {
  Vec3 total = assembly.bias;
  for (std::size_t i = 0; i < assembly.wires.size(); ++i) {
    const Wire& w = assembly.wires[i];
    if (const auto* line = std::get_if<InfiniteLine>(&w.geometry)) {
      auto b = kernel::line_field<double>(line->point, line->direction, w.idc, p,
                                          assembly.tolerances.exclusion_radius);
      if (!b) throw_fenced(i);
      total += *b;
    } else {
      auto jet = wire_field_jet(w.geometry, w.idc, p, assembly.tolerances.exclusion_radius);
      if (!jet) throw_fenced(i);
      total += jet->value;
    }
  }
  return total;
}

FieldJet b_dc_jet(const WireAssembly& assembly, const Vec3& p) {
  return superpose(assembly, p, Channel::DC);
}

void require_in_phase(const WireAssembly& assembly) {
  std::optional<double> phase;
  for (const auto& w : assembly.wires) {
    if (w.irf == 0.0) continue;
    if (!phase) {
      phase = w.rf_phase;
    } else if (std::abs(w.rf_phase - *phase) > 1e-12) {
      throw Error(ErrorCode::Unsupported,
                  "RF currents with different phases (elliptical RF polarization) are not supported");
    }
  }
}

Vec3 b_rf_amplitude(const WireAssembly& assembly, const Vec3& p) {
  require_in_phase(assembly);
  return superpose(assembly, p, Channel::RF).value;
}

FieldJet b_rf_jet(const WireAssembly& assembly, const Vec3& p) {
  require_in_phase(assembly);
  return superpose(assembly, p, Channel::RF);
}

double distance_to_wire(const WireGeometry& geometry, const Vec3& p) {
  return std::visit(Overloaded{
                        [&](const InfiniteLine& line) {
                          const Vec3 r = p - line.point;
                          return (r - line.direction * line.direction.dot(r)).norm();
                        },
                        [&](const Polyline& poly) {
                          double best = std::numeric_limits<double>::infinity();
                          for (std::size_t s = 0; s + 1 < poly.vertices.size(); ++s) {
                            const kernel::SegmentFrame<double> f(poly.vertices[s], poly.vertices[s + 1], p);
                            best = std::min(best, f.distance());
                          }
                          return best;
                        },
                    },
                    geometry);
}

bool inside_any_fence(const WireAssembly& assembly, const Vec3& p) {
  for (const auto& w : assembly.wires) {
    if (!(distance_to_wire(w.geometry, p) > assembly.tolerances.exclusion_radius)) return true;
  }
  return false;
}

Vec3 WireFrame::at(double azimuth, double radius) const {
  return origin + radius * (std::cos(azimuth) * e1 + std::sin(azimuth) * e2);
}

WireFrame wire_frame(const WireGeometry& geometry, double axial) {
  WireFrame frame;
  std::visit(Overloaded{
                 [&](const InfiniteLine& line) {
                   frame.origin = line.point + axial * line.direction;
                   frame.tangent = line.direction;
                 },
                 [&](const Polyline& poly) {
                   double remaining = std::max(0.0, axial);
                   frame.origin = poly.vertices.back();
                   frame.tangent = (poly.vertices.back() - poly.vertices[poly.vertices.size() - 2]).normalized();
                   for (std::size_t s = 0; s + 1 < poly.vertices.size(); ++s) {
                     const Vec3 seg = poly.vertices[s + 1] - poly.vertices[s];
                     const double len = seg.norm();
                     if (remaining <= len) {
                       frame.tangent = seg / len;
                       frame.origin = poly.vertices[s] + remaining * frame.tangent;
                       break;
                     }
                     remaining -= len;
                   }
                 },
             },
             geometry);
  frame.e1 = perpendicular_unit(frame.tangent);
  frame.e2 = frame.tangent.cross(frame.e1);
  return frame;
}

std::pair<Vec3, Vec3> closest_axis_points(const InfiniteLine& a, const InfiniteLine& b) {
  const Vec3 w0 = a.point - b.point;
  const double ab = a.direction.dot(b.direction);
  const double d = a.direction.dot(w0);
  const double e = b.direction.dot(w0);
  const double denom = 1.0 - ab * ab;
  double s = 0.0;
  double t = 0.0;
  if (denom < 1e-14) {
    t = e;  // parallel: any pair along the common perpendicular
  } else {
    s = (ab * e - d) / denom;
    t = (e - ab * d) / denom;
  }
  return {a.point + s * a.direction, b.point + t * b.direction};
}

}  // namespace synapse
