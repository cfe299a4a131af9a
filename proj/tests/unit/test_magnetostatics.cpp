#include <doctest.h>

#include "support.hpp"
#include "synapse/error.hpp"
#include "synapse/magnetostatics.hpp"

using namespace synapse;
using test::rel;

namespace {

Vec3 perpendicular(const Vec3& d) { return d.unitOrthogonal(); }

}  // namespace

TEST_SUITE("magnetostatics") {
  TEST_CASE("infinite wire matches mu0 I / (2 pi rho) with right-handed direction") {
    for (int n = 0; n < 200; ++n) {
      const InfiniteLine line{test::uniform_vec(-1e-3, 1e-3), test::unit_vec()};
      const double current = test::uniform(-1.0, 1.0);
      const double rho = std::pow(10.0, test::uniform(-6.0, -2.0));
      const Vec3 radial = (perpendicular(line.direction) * std::cos(n) +
                           line.direction.cross(perpendicular(line.direction)) * std::sin(n)).normalized();
      const Vec3 p = line.point + test::uniform(-1e-3, 1e-3) * line.direction + rho * radial;
      const Vec3 b = field_infinite_wire(line, current, p);
      const double expected = PhysicalConstants::mu0 * std::abs(current) / (2.0 * std::numbers::pi * rho);
      CHECK(rel(b.norm(), expected) <= 1e-12);
      const Vec3 dir = (current > 0 ? 1.0 : -1.0) * line.direction.cross(radial);
      CHECK((b.normalized() - dir).norm() <= 1e-12);
    }
  }

  TEST_CASE("long polyline approaches the infinite wire") {
    const double rho = 1e-4;
    const double half = 0.5e6 * rho;
    const Polyline poly{{Vec3(-half, 0, 0), Vec3(-0.3 * rho, 0, 0), Vec3(half, 0, 0)}};
    const InfiniteLine line{Vec3::Zero(), Vec3::UnitX()};
    for (int n = 0; n < 20; ++n) {
      const Vec3 p = Vec3(test::uniform(-rho, rho), 0, 0) + rho * Vec3(0, std::cos(n), std::sin(n));
      const Vec3 a = field_polyline(poly, 0.1, p);
      const Vec3 b = field_infinite_wire(line, 0.1, p);
      CHECK((a - b).norm() / b.norm() <= 1e-8);
    }
  }

  TEST_CASE("finite segment: on-axis extension has no field, perpendicular bisector matches closed form") {
    const Polyline seg{{Vec3(-1e-3, 0, 0), Vec3(1e-3, 0, 0)}};
    CHECK(field_polyline(seg, 1.0, Vec3(2e-3, 0, 0)).norm() == 0.0);
    const double d = 5e-4, L = 1e-3;  // half-length L
    const double expected = PhysicalConstants::mu0 * 1.0 / (2.0 * std::numbers::pi * d) * L / std::hypot(L, d);
    CHECK(rel(field_polyline(seg, 1.0, Vec3(0, d, 0)).norm(), expected) <= 1e-12);
  }

  TEST_CASE("linearity in currents and bias") {
    WireAssembly a = crossed_wires();
    a.wires.push_back({Polyline{{Vec3(-1e-3, 2e-4, 1e-4), Vec3(0, 3e-4, 2e-4), Vec3(1e-3, 1e-4, 0)}}, 0.03, 0.0, 0.0});
    for (int n = 0; n < 100; ++n) {
      const double alpha = test::uniform(-3.0, 3.0);
      WireAssembly s = a;
      for (Wire& w : s.wires) w.idc *= alpha;
      s.bias *= alpha;
      const Vec3 p = test::uniform_vec(-5e-4, 5e-4);
      if (inside_any_fence(a, p)) continue;
      const Vec3 b = b_dc(a, p);
      CHECK((b_dc(s, p) - alpha * b).norm() <= 1e-13 * std::abs(alpha) * b.norm() + 1e-30);
    }
  }

  TEST_CASE("divergence free") {
    WireAssembly a = crossed_wires();
    a.wires.push_back({Polyline{{Vec3(-1e-3, 2e-4, 1e-4), Vec3(0, 3e-4, 2e-4), Vec3(1e-3, 1e-4, 0)}}, 0.03, 0.0, 0.0});
    int checked = 0;
    for (int n = 0; n < 200; ++n) {
      const Vec3 p = test::uniform_vec(-5e-4, 5e-4);
      if (inside_any_fence(a, p)) continue;
      const Mat3 J = b_dc_jet(a, p).jacobian;
      CHECK(std::abs(J.trace()) <= 1e-12 * J.norm());
      ++checked;
    }
    CHECK(checked > 100);
  }

  TEST_CASE("analytic Jacobian matches central differences") {
    WireAssembly a = crossed_wires();
    a.wires.push_back({Polyline{{Vec3(-1e-3, 2e-4, 1e-4), Vec3(0, 3e-4, 2e-4), Vec3(1e-3, 1e-4, 0)}}, 0.03, 0.01, 0.0});
    for (int n = 0; n < 50; ++n) {
      const Vec3 p = test::uniform_vec(-5e-4, 5e-4);
      double L = 1e9;
      for (const Wire& w : a.wires) L = std::min(L, distance_to_wire(w.geometry, p));
      if (L < 2e-5) continue;
      const FieldJet jet = b_dc_jet(a, p);
      const double h = 1e-4 * L;
      Mat3 fd;
      for (int k = 0; k < 3; ++k) {
        const Vec3 e = Vec3::Unit(k) * h;
        fd.col(k) = (b_dc(a, p + e) - b_dc(a, p - e)) / (2.0 * h);
      }
      CHECK((jet.jacobian - fd).norm() <= 1e-6 * jet.jacobian.norm());
      CHECK((jet.value - b_dc(a, p)).norm() <= 1e-15 * jet.value.norm());
    }
  }

  TEST_CASE("fence: inside the exclusion radius is a singularity error naming the wire") {
    const WireAssembly a = crossed_wires();
    try {
      b_dc(a, Vec3(0, 1e-3, -3.5e-4 + 1e-10));
      FAIL("expected singularity");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Singularity);
      CHECK(std::string(e.what()).find("wire 1") != std::string::npos);
    }
    CHECK(inside_any_fence(a, Vec3(1e-3, 5e-10, 0)));
    CHECK_FALSE(inside_any_fence(a, Vec3(1e-3, 5e-9, 0)));
  }

  TEST_CASE("wire validation") {
    Wire w{InfiniteLine{Vec3::Zero(), Vec3(1, 1, 0)}, 1.0, 0.0, 0.0};
    CHECK_THROWS_AS(w.validate(), Error);
    w.geometry = Polyline{{Vec3::Zero(), Vec3::Zero()}};
    CHECK_THROWS_AS(w.validate(), Error);
    w.geometry = Polyline{{Vec3::Zero()}};
    CHECK_THROWS_AS(w.validate(), Error);
    w.geometry = InfiniteLine{};
    w.irf = -1.0;
    CHECK_THROWS_AS(w.validate(), Error);
  }

  TEST_CASE("RF wires out of phase are unsupported") {
    WireAssembly a = crossed_wires();
    a.wires[1].rf_phase = 0.5;
    try {
      b_rf_amplitude(a, Vec3(0, 1e-4, 1e-4));
      FAIL("expected unsupported");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Unsupported);
    }
    a.wires[1].irf = 0.0;  // a wire without RF has no phase to disagree with
    CHECK_NOTHROW(b_rf_amplitude(a, Vec3(0, 1e-4, 1e-4)));
  }

  TEST_CASE("closest points of skew axes and the wire frame") {
    const auto [pa, pb] = closest_axis_points(InfiniteLine{Vec3(5, 0, 0), Vec3::UnitX()},
                                              InfiniteLine{Vec3(0, 7, -2), Vec3::UnitY()});
    CHECK((pa - Vec3(0, 0, 0)).norm() < 1e-15);
    CHECK((pb - Vec3(0, 0, -2)).norm() < 1e-15);
    const WireFrame f = wire_frame(InfiniteLine{Vec3(1, 2, 3), Vec3::UnitY()}, 0.5);
    CHECK((f.origin - Vec3(1, 2.5, 3)).norm() < 1e-15);
    CHECK(std::abs(f.e1.dot(f.tangent)) < 1e-15);
    CHECK(std::abs(f.e2.dot(f.e1)) < 1e-15);
    CHECK(((f.at(0.3, 2.0) - f.origin).norm() - 2.0) < 1e-15);
  }
}
