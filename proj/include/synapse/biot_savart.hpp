#pragma once

// Closed-form Biot-Savart kernels for straight conductors. Each kernel returns
// std::nullopt when the evaluation point lies inside the exclusion radius.

#include <cmath>
#include <numbers>
#include <optional>

#include "synapse/model.hpp"
#include "synapse/types.hpp"

namespace synapse {

template <typename Scalar>
struct FieldJetT {
  Vector3<Scalar> value;
  Matrix3<Scalar> jacobian;  // d value_i / d p_j
};

using FieldJet = FieldJetT<double>;

namespace kernel {

template <typename Scalar>
constexpr Scalar mu0_over_2pi() {
  return Scalar(PhysicalConstants::mu0) / (Scalar(2) * std::numbers::pi_v<Scalar>);
}

/// Infinite straight line through `point` along unit `dir`:
/// B = mu0 I / (2 pi rho) * (dir x rho_hat).
template <typename Scalar>
std::optional<Vector3<Scalar>> line_field(const Vector3<Scalar>& point, const Vector3<Scalar>& dir,
                                          Scalar current, const Vector3<Scalar>& p,
                                          Scalar exclusion) {
  const Vector3<Scalar> r = p - point;
  const Vector3<Scalar> rperp = r - dir * dir.dot(r);
  const Scalar rho2 = rperp.squaredNorm();
  if (!(rho2 > exclusion * exclusion)) return std::nullopt;
  return Vector3<Scalar>(mu0_over_2pi<Scalar>() * current * dir.cross(rperp) / rho2);
}

template <typename Scalar>
std::optional<FieldJetT<Scalar>> line_field_jet(const Vector3<Scalar>& point,
                                                const Vector3<Scalar>& dir, Scalar current,
                                                const Vector3<Scalar>& p, Scalar exclusion) {
  const Vector3<Scalar> r = p - point;
  const Vector3<Scalar> rperp = r - dir * dir.dot(r);
  const Scalar rho2 = rperp.squaredNorm();
  if (!(rho2 > exclusion * exclusion)) return std::nullopt;
  const Scalar k = mu0_over_2pi<Scalar>() * current;
  const Vector3<Scalar> w = dir.cross(rperp);
  FieldJetT<Scalar> jet;
  jet.value = k * w / rho2;
  // d(rperp)/dp = I - dir dir^T, and skew(dir) annihilates the dir dir^T part.
  jet.jacobian = k * (skew(dir) / rho2 - Scalar(2) * w * rperp.transpose() / (rho2 * rho2));
  return jet;
}

/// Geometry of a point relative to the segment a -> b.
template <typename Scalar>
struct SegmentFrame {
  Vector3<Scalar> t;      // unit direction
  Scalar length;
  Vector3<Scalar> r1;     // p - a
  Vector3<Scalar> r2;     // p - b
  Scalar n1, n2;          // |r1|, |r2|
  Scalar u1, u2;          // (a - p).t, (b - p).t
  Vector3<Scalar> rperp;  // perpendicular offset of p from the segment's line
  Scalar rho2;

  SegmentFrame(const Vector3<Scalar>& a, const Vector3<Scalar>& b, const Vector3<Scalar>& p) {
    const Vector3<Scalar> ab = b - a;
    length = ab.norm();
    t = ab / length;
    r1 = p - a;
    r2 = p - b;
    n1 = r1.norm();
    n2 = r2.norm();
    u1 = -r1.dot(t);
    u2 = u1 + length;
    rperp = r1 + u1 * t;
    rho2 = rperp.squaredNorm();
  }

  Scalar distance() const {
    if (u1 > Scalar(0)) return n1;
    if (u2 < Scalar(0)) return n2;
    using std::sqrt;
    return sqrt(rho2);
  }

  /// True when p projects outside the segment: then both end terms share a sign
  /// and the difference u2/n2 - u1/n1 must be formed without cancellation.
  bool beyond_ends() const { return u1 * u2 > Scalar(0); }

  /// g = (u2/n2 - u1/n1) / rho^2, the scalar factor of the finite-segment field.
  Scalar g() const {
    if (beyond_ends()) {
      return length * (u1 + u2) / (n1 * n2 * (u2 * n1 + u1 * n2));
    }
    return (u2 / n2 - u1 / n1) / rho2;
  }

  Vector3<Scalar> grad_g() const {
    const Vector3<Scalar> dn1 = r1 / n1;
    const Vector3<Scalar> dn2 = r2 / n2;
    if (beyond_ends()) {
      const Scalar s = u2 * n1 + u1 * n2;
      const Scalar d = n1 * n2 * s;
      const Vector3<Scalar> ds = -t * n1 + u2 * dn1 - t * n2 + u1 * dn2;
      const Vector3<Scalar> dd = (n2 * dn1 + n1 * dn2) * s + n1 * n2 * ds;
      return length * (Scalar(-2) * t / d - (u1 + u2) * dd / (d * d));
    }
    const Scalar f = u2 / n2 - u1 / n1;
    const Vector3<Scalar> df = (-t / n2 - u2 * r2 / (n2 * n2 * n2)) - (-t / n1 - u1 * r1 / (n1 * n1 * n1));
    return df / rho2 - Scalar(2) * f * rperp / (rho2 * rho2);
  }
};

/// Exact field of the finite straight segment a -> b carrying `current`.
template <typename Scalar>
std::optional<Vector3<Scalar>> segment_field(const Vector3<Scalar>& a, const Vector3<Scalar>& b,
                                             Scalar current, const Vector3<Scalar>& p,
                                             Scalar exclusion) {
  const SegmentFrame<Scalar> s(a, b, p);
  if (!(s.distance() > exclusion)) return std::nullopt;
  const Scalar c = mu0_over_2pi<Scalar>() * current / Scalar(2);
  return Vector3<Scalar>(c * s.g() * s.t.cross(s.rperp));
}

template <typename Scalar>
std::optional<FieldJetT<Scalar>> segment_field_jet(const Vector3<Scalar>& a,
                                                   const Vector3<Scalar>& b, Scalar current,
                                                   const Vector3<Scalar>& p, Scalar exclusion) {
  const SegmentFrame<Scalar> s(a, b, p);
  if (!(s.distance() > exclusion)) return std::nullopt;
  const Scalar c = mu0_over_2pi<Scalar>() * current / Scalar(2);
  const Vector3<Scalar> w = s.t.cross(s.rperp);
  const Scalar g = s.g();
  FieldJetT<Scalar> jet;
  jet.value = c * g * w;
  jet.jacobian = c * (w * s.grad_g().transpose() + g * skew(s.t));
  return jet;
}

}  // namespace kernel
}  // namespace synapse
