#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace synapse {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

/// Cross-product matrix: skew(a) * b == a.cross(b).
template <typename Derived>
Matrix3<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Matrix3<Scalar> m;
  m << Scalar(0), -a.z(), a.y(),
       a.z(), Scalar(0), -a.x(),
       -a.y(), a.x(), Scalar(0);
  return m;
}

/// Axis-aligned box [lower, upper].
struct Box {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Zero();

  bool contains(const Vec3& p) const {
    return (p.array() >= lower.array()).all() && (p.array() <= upper.array()).all();
  }
};

}  // namespace synapse
