#include <doctest.h>

#include "support.hpp"
#include "synapse/error.hpp"
#include "synapse/optimize.hpp"

using namespace synapse;

TEST_SUITE("optimize") {
  TEST_CASE("Brent finds a parabola vertex and a boundary minimum") {
    const LineMinimum m = brent_minimize([](double x) { return (x - 1.3) * (x - 1.3) + 2.0; }, 0.0, 3.0, 1e-12);
    CHECK(std::abs(m.x - 1.3) <= 1e-7);
    CHECK(m.value == doctest::Approx(2.0));
    const LineMinimum v = brent_minimize([](double x) { return std::abs(x - 0.7); }, 0.0, 3.0, 1e-12);
    CHECK(std::abs(v.x - 0.7) <= 1e-10);
    const LineMinimum edge = brent_minimize([](double x) { return x; }, 0.0, 1.0, 1e-10);
    CHECK(edge.x <= 1e-8);
  }

  TEST_CASE("descent on a rotated anisotropic bowl") {
    for (int trial = 0; trial < 10; ++trial) {
      const Mat3 R = Eigen::Quaterniond::UnitRandom().toRotationMatrix();
      const Vec3 d(1.0, test::uniform(3, 30), test::uniform(30, 300));
      const Mat3 A = R * d.asDiagonal() * R.transpose();
      const Vec3 c = test::uniform_vec(-1e-4, 1e-4);
      const Objective f = [&](const Vec3& x) {
        const Vec3 r = x - c;
        return ValueGradient{r.dot(A * r), 2.0 * A * r};
      };
      DescentOptions o;
      o.length_scale = 1e-4;
      o.energy_scale = 1e-8;
      o.tol_grad = 1e-14;
      o.max_iterations = 2000;
      const DescentResult r = descend(f, c + test::uniform_vec(-2e-4, 2e-4), o);
      CHECK(r.converged);
      CHECK((r.position - c).norm() <= 1e-10);
    }
  }

  TEST_CASE("descent backs off from an excluded region") {
    const Objective f = [](const Vec3& x) -> ValueGradient {
      if (x.x() > 0.5) throw Error(ErrorCode::Singularity, "fenced");
      const Vec3 r = x - Vec3(0.4, 0, 0);
      return {r.squaredNorm(), 2.0 * r};
    };
    DescentOptions o;
    o.tol_grad = 1e-10;
    o.max_step = 10.0;
    const DescentResult r = descend(f, Vec3(-3, 1, 0), o);
    CHECK((r.position - Vec3(0.4, 0, 0)).norm() <= 1e-8);
    CHECK_THROWS_AS(descend(f, Vec3(1, 0, 0), o), Error);
  }

  TEST_CASE("finite-difference Hessian and index") {
    const Mat3 H = (Mat3() << -2, 0.5, 0, 0.5, 3, 0.1, 0, 0.1, 7).finished();
    const Objective f = [&](const Vec3& x) { return ValueGradient{0.5 * x.dot(H * x), H * x}; };
    const Mat3 fd = finite_difference_hessian(f, Vec3(0.3, -0.1, 0.2), 1e-4);
    CHECK((fd - H).norm() <= 1e-9);
    CHECK(hessian_index(H) == 1);
    CHECK(hessian_index(Mat3::Identity()) == 0);
    CHECK(hessian_index(-Mat3::Identity()) == 3);
    CHECK(hessian_index(Vec3(-1e-12, 1, 2).asDiagonal().toDenseMatrix()) == 0);
  }
}
