#include <doctest.h>

#include "support.hpp"
#include "synapse/error.hpp"
#include "synapse/saddle.hpp"

using namespace synapse;

namespace {

// (x^2 - a^2)^2 + y^2 + z^2 in a rotated frame: minima at +-a, saddle a^4 at 0.
Objective double_well(double a, const Mat3& R, const Vec3& shift) {
  return [=](const Vec3& p) {
    const Vec3 q = R.transpose() * (p - shift);
    const double s = q.x() * q.x() - a * a;
    const Vec3 g(4.0 * q.x() * s, 2.0 * q.y(), 2.0 * q.z());
    return ValueGradient{s * s + q.y() * q.y() + q.z() * q.z(), R * g};
  };
}

}  // namespace

TEST_SUITE("saddle") {
  TEST_CASE("double-well barrier a^4 with Hessian index 1") {
    for (int trial = 0; trial < 8; ++trial) {
      const double a = test::uniform(0.5, 2.0);
      const Mat3 R = Eigen::Quaterniond::UnitRandom().toRotationMatrix();
      const Vec3 shift = test::uniform_vec(-1, 1);
      const Objective f = double_well(a, R, shift);
      const Vec3 endA = shift + R * Vec3(-0.9 * a, 0.1, -0.05);
      const Vec3 endB = shift + R * Vec3(1.1 * a, -0.1, 0.02);
      SaddleOptions o;
      const BarrierResult r = find_saddle(f, endA, endB, o);
      CHECK(r.converged);
      CHECK(r.hessian_index == 1);
      CHECK(test::rel(r.barrierA, std::pow(a, 4)) <= 1e-6);
      CHECK(test::rel(r.barrierB, std::pow(a, 4)) <= 1e-6);
      CHECK((r.saddle.position - shift).norm() <= 1e-6 * a);
      CHECK((r.minA.position - (shift - R * Vec3(a, 0, 0))).norm() <= 1e-6 * a);
      CHECK(r.path.size() == static_cast<std::size_t>(o.images));
      CHECK(r.path_energy.size() == r.path.size());
    }
  }

  TEST_CASE("straight band through a symmetric maximum still finds an index-1 saddle") {
    // Wells at (+-1, +-1, 0); the chord from (-1,-1) to (1,1) crosses the
    // index-2 point at the origin (V = 2) while the true saddles have V = 1.
    const Objective f = [](const Vec3& p) {
      const double sx = p.x() * p.x() - 1.0, sy = p.y() * p.y() - 1.0;
      return ValueGradient{sx * sx + sy * sy + p.z() * p.z(),
                           Vec3(4.0 * p.x() * sx, 4.0 * p.y() * sy, 2.0 * p.z())};
    };
    const BarrierResult r = find_saddle(f, Vec3(-1, -1, 0), Vec3(1, 1, 0), SaddleOptions{});
    CHECK(r.hessian_index == 1);
    CHECK(r.barrier() == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("symmetric wells give equal barriers from both sides") {
    const Objective f = double_well(1.0, Mat3::Identity(), Vec3::Zero());
    const BarrierResult r = find_saddle(f, Vec3(-1, 0, 0), Vec3(1, 0, 0), SaddleOptions{});
    CHECK(std::abs(r.barrierA - r.barrierB) <= 1e-10);
    CHECK(r.barrier() == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("invalid requests") {
    const Objective f = double_well(1.0, Mat3::Identity(), Vec3::Zero());
    CHECK_THROWS_AS(find_saddle(f, Vec3(1, 0, 0), Vec3(1, 0, 0), SaddleOptions{}), Error);
    SaddleOptions few;
    few.images = 2;
    CHECK_THROWS_AS(find_saddle(f, Vec3(-1, 0, 0), Vec3(1, 0, 0), few), Error);
    // Both ends in the same basin.
    CHECK_THROWS_AS(find_saddle(f, Vec3(0.8, 0.1, 0), Vec3(1.2, -0.1, 0), SaddleOptions{}), Error);
  }
}
