#include <doctest.h>

#include "support.hpp"
#include "synapse/barrier.hpp"
#include "synapse/error.hpp"

using namespace synapse;

namespace {

WireAssembly crossed_at(double idc, double irf = 0.05) {
  CrossedSceneOptions o;
  o.idc = idc;
  o.irf = irf;
  return crossed_wires(o);
}

double parallel_critical(double d) {
  return std::numbers::pi * d * test::params().resonance_field() / PhysicalConstants::mu0;
}

}  // namespace

TEST_SUITE("barrier") {
  TEST_CASE("default seeds sit on the common perpendicular") {
    const DressedParams p = test::params();
    const WellSeeds s = default_well_seeds(p, crossed_wires());
    const double rres = 1.6183e-4;
    CHECK((s.a - Vec3(0, 0, -rres)).norm() <= 1e-7);
    CHECK((s.b - Vec3(0, 0, -3.5e-4 + rres)).norm() <= 1e-7);
  }

  TEST_CASE("crossed wires below critical: positive barrier, index-1 saddle") {
    const DressedParams p = test::params();
    const BarrierResult r = barrier_height(p, crossed_at(0.05));
    CHECK(r.converged);
    CHECK_FALSE(r.touching);
    CHECK_FALSE(r.merged);
    CHECK(r.hessian_index == 1);
    CHECK(r.barrier() > 100.0 * r.touch_tolerance);
    // ~31 uK at 50 mA.
    CHECK(r.barrier() / PhysicalConstants::kB == doctest::Approx(31.3e-6).epsilon(0.05));
    CHECK(r.saddle.U > std::max(r.minA.U, r.minB.U));
    CHECK(r.saddle.position.z() < r.minA.position.z());
    CHECK(r.saddle.position.z() > r.minB.position.z());
  }

  TEST_CASE("barrier falls as the DC current rises and vanishes above critical") {
    const DressedParams p = test::params();
    double last = std::numeric_limits<double>::infinity();
    for (double idc : {0.05, 0.07, 0.09}) {
      const BarrierResult r = barrier_height(p, crossed_at(idc));
      CHECK(r.barrier() < last);
      last = r.barrier();
    }
    const BarrierResult above = barrier_height(p, crossed_at(0.1));
    CHECK(above.touching);
  }

  TEST_CASE("parallel wires, geometric mode: touching switches at pi d B_res / mu0") {
    const DressedParams p = test::params();
    BarrierOptions o;
    o.mode = BarrierMode::Geometric;
    const double d = 2e-4, ic = parallel_critical(d);
    CHECK(ic == doctest::Approx(0.05716).epsilon(1e-4));
    const BarrierResult below = barrier_height(p, parallel_wires(d, 0.99 * ic, 0.0), o);
    const BarrierResult above = barrier_height(p, parallel_wires(d, 1.01 * ic, 0.0), o);
    CHECK_FALSE(below.touching);
    CHECK(below.barrier() > 0.0);
    CHECK(above.touching);
    CHECK(above.barrier() <= 0.0);
    // The saddle sits midway between the wires.
    CHECK(std::abs(below.saddle.position.y()) <= 1e-3 * d);
  }

  TEST_CASE("geometric objective is negative inside the tube and zero on resonance") {
    const DressedParams p = test::params();
    const WireAssembly a = single_wire(0.0925, 0.0);
    const Objective v = resonance_objective(p, a);
    const double rres = 1.6183e-4;
    CHECK(v(Vec3(0, 0.7 * rres, 0)).value < 0.0);
    CHECK(v(Vec3(0, 1.3 * rres, 0)).value > 0.0);
    CHECK(std::abs(v(Vec3(0, 0, rres * (1.6183e-4 / rres))).value) <= 1e-3 * PhysicalConstants::hbar * p.drive.omega());
    // Flat deep inside (|B| >= 2 B_res).
    CHECK(v(Vec3(0, 0.2 * rres, 0)).gradient.norm() == 0.0);
  }

  TEST_CASE("polyline wires are rejected for default seeds") {
    WireAssembly a = crossed_wires();
    a.wires[0].geometry = Polyline{{Vec3(-1, 0, 0), Vec3(1, 0, 0)}};
    CHECK_THROWS_AS(barrier_height(test::params(), a), Error);
  }

  TEST_CASE("mode names") {
    CHECK(parse_barrier_mode("full") == BarrierMode::Full);
    CHECK(parse_barrier_mode("geometric") == BarrierMode::Geometric);
    CHECK(std::string(to_string(BarrierMode::Geometric)) == "geometric");
    CHECK_THROWS_AS(parse_barrier_mode("fast"), Error);
  }
}
