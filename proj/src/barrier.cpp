#include "synapse/barrier.hpp"

#include <algorithm>
#include <cmath>

#include "synapse/minimum_surface.hpp"

namespace synapse {
namespace {

const InfiniteLine& require_line(const WireAssembly& assembly, int wire) {
  if (wire < 0 || wire >= static_cast<int>(assembly.wires.size())) {
    throw Error(ErrorCode::InvalidArgument, "wire index " + std::to_string(wire) + " out of range");
  }
  const auto* line = std::get_if<InfiniteLine>(&assembly.wires[wire].geometry);
  if (!line) {
    throw Error(ErrorCode::Unsupported, "default well seeds need infinite-line wires; give seeds explicitly");
  }
  return *line;
}

struct Axis {
  Vec3 pa, pb, u;
  double dist;
};

Axis common_perpendicular(const WireAssembly& assembly, int wa, int wb) {
  const InfiniteLine& a = require_line(assembly, wa);
  const InfiniteLine& b = require_line(assembly, wb);
  auto [pa, pb] = closest_axis_points(a, b);
  Vec3 d = pb - pa;
  double dist = d.norm();
  Vec3 u;
  if (dist > 0.0) {
    u = d / dist;
  } else {
    u = a.direction.cross(b.direction);
    if (u.norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "wires coincide");
    u.normalize();
  }
  return {pa, pb, u, dist};
}

double well_depth(const Objective& f, const Vec3& a, const Vec3& b, double ua, double ub) {
  constexpr int n = 64;
  double peak = std::max(ua, ub);
  for (int i = 1; i < n; ++i) {
    const Vec3 p = a + (b - a) * (static_cast<double>(i) / n);
    try {
      peak = std::max(peak, f(p).value);
    } catch (const Error&) {
    }
  }
  return std::min(peak - ua, peak - ub);
}

}  // namespace

const char* to_string(BarrierMode mode) { return mode == BarrierMode::Full ? "full" : "geometric"; }

BarrierMode parse_barrier_mode(const std::string& text) {
  if (text == "full") return BarrierMode::Full;
  if (text == "geometric") return BarrierMode::Geometric;
  throw Error(ErrorCode::InvalidArgument, "unknown barrier mode '" + text + "'");
}

WellSeeds default_well_seeds(const DressedParams& params, const WireAssembly& assembly, int wire_a,
                             int wire_b) {
  const Axis ax = common_perpendicular(assembly, wire_a, wire_b);
  double ra = resonance_radius(params, assembly.wires[wire_a]);
  double rb = resonance_radius(params, assembly.wires[wire_b]);
  if (ax.dist > 0.0 && ra + rb >= ax.dist) ra = rb = 0.3 * ax.dist;
  return {ax.pa + ra * ax.u, ax.pb - rb * ax.u};
}

Objective resonance_objective(const DressedParams& params, const WireAssembly& assembly) {
  // V = scale h(x), x = |B| / B_res, with h'(x) = -(1 - (x/c)^2)^2 on [0, c] and
  // zero beyond: strictly decreasing up to c, h(1) = 0, flat deep inside the
  // tubes so band images are not drawn onto the wire axis.
  constexpr double c = 2.0;
  const auto P = [](double t) { return t - 2.0 * t * t * t / (3.0 * c * c) + std::pow(t, 5) / (5.0 * c * c * c * c); };
  const double scale = params.energy_prefactor() * params.drive.omega();
  const double bres = params.resonance_field();
  return [=](const Vec3& p) {
    const FieldJet jet = b_dc_jet(assembly, p);
    const double b = jet.value.norm();
    if (b < assembly.tolerances.zero_threshold) {
      throw Error(ErrorCode::QuantizationAxis, "field zero on the resonance objective");
    }
    const double x = std::min(b / bres, c);
    const double w = 1.0 - (x / c) * (x / c);
    ValueGradient r;
    r.value = -scale * (P(x) - P(1.0));
    r.gradient = (-scale * w * w / bres) * (jet.jacobian.transpose() * (jet.value / b));
    return r;
  };
}

BarrierResult barrier_height(const DressedParams& params, const WireAssembly& assembly,
                             const Vec3& seed_a, const Vec3& seed_b, const BarrierOptions& options) {
  assembly.validate();
  const double separation = (seed_b - seed_a).norm();
  if (separation == 0.0) throw Error(ErrorCode::InvalidArgument, "well seeds coincide");

  if (options.mode == BarrierMode::Geometric) {
    const Objective f = resonance_objective(params, assembly);
    SaddleOptions so = options.saddle;
    so.descend_endpoints = false;
    if (so.initial_bend == 0.0) so.initial_bend = 0.5 * separation;
    BarrierResult r = find_saddle(f, seed_a, seed_b, so);
    // Signed: the saddle value itself, not a difference to the (fenced) tube interior.
    r.barrierA = r.barrierB = r.saddle.U;
    r.touch_tolerance = options.touch_tolerance.value_or(
        1e-9 * std::abs(params.energy_prefactor() * params.drive.omega()));
    r.touching = r.saddle.U <= r.touch_tolerance;
    return r;
  }

  const Objective f = dressed_objective(params, assembly);
  const double length = options.saddle.length_scale > 0.0 ? options.saddle.length_scale : separation;
  // Steps stay well below the trap size so a seed cannot hop over a wire.
  double trap = length;
  for (const Wire& w : assembly.wires) {
    if (w.idc != 0.0) trap = std::min(trap, resonance_radius(params, w));
  }
  DescentOptions d;
  d.length_scale = trap;
  d.energy_scale = std::max(std::abs(f(seed_a).value), std::abs(f(seed_b).value));
  if (!(d.energy_scale > 0.0)) d.energy_scale = 1.0;
  d.tol_grad = 1e-9 * d.energy_scale / trap;
  d.max_step = 0.05;
  d.max_iterations = 2000;
  const DescentResult a = descend(f, seed_a, d);
  const DescentResult b = descend(f, seed_b, d);

  const double merge = options.merge_distance > 0.0 ? options.merge_distance : 1e-3 * separation;
  if ((a.position - b.position).norm() <= merge) {
    BarrierResult r;
    r.minA = {a.position, a.value};
    r.minB = {b.position, b.value};
    r.saddle = r.minA;
    r.path = {a.position, b.position};
    r.path_energy = {a.value, b.value};
    r.converged = true;
    r.merged = true;
    r.touching = true;
    r.touch_tolerance = options.touch_tolerance.value_or(0.0);
    r.warnings.push_back("well seeds descend into a single minimum; the barrier is gone");
    return r;
  }

  SaddleOptions so = options.saddle;
  so.descend_endpoints = false;
  if (so.length_scale <= 0.0) so.length_scale = length;
  BarrierResult r = find_saddle(f, a.position, b.position, so);
  if (!a.converged || !b.converged) r.warnings.push_back("well descent stopped before convergence");
  r.touch_tolerance = options.touch_tolerance
                          ? *options.touch_tolerance
                          : 1e-3 * well_depth(f, a.position, b.position, a.value, b.value);
  r.touching = r.barrier() <= r.touch_tolerance;
  return r;
}

BarrierResult barrier_height(const DressedParams& params, const WireAssembly& assembly,
                             const BarrierOptions& options) {
  if (options.mode == BarrierMode::Geometric) {
    const Axis ax = common_perpendicular(assembly, options.wire_a, options.wire_b);
    const double ra = std::min(0.5 * resonance_radius(params, assembly.wires[options.wire_a]), 0.25 * ax.dist);
    const double rb = std::min(0.5 * resonance_radius(params, assembly.wires[options.wire_b]), 0.25 * ax.dist);
    BarrierOptions o = options;
    if (!o.saddle.bend_direction) {
      const Vec3& t = require_line(assembly, options.wire_a).direction;
      Vec3 bend = ax.u.cross(t);
      if (bend.norm() > 1e-12) o.saddle.bend_direction = bend.normalized();
    }
    return barrier_height(params, assembly, ax.pa + ra * ax.u, ax.pb - rb * ax.u, o);
  }
  const WellSeeds s = default_well_seeds(params, assembly, options.wire_a, options.wire_b);
  return barrier_height(params, assembly, s.a, s.b, options);
}

}  // namespace synapse
