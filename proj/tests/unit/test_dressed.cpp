#include <doctest.h>

#include "support.hpp"
#include "synapse/error.hpp"
#include "synapse/dressed.hpp"

using namespace synapse;
using test::rel;

namespace {

// Wire along x carrying only RF: amplitude 1e-4 T along +z at (0, 1e-3, 0).
WireAssembly rf_probe(const Vec3& bias) {
  WireAssembly a;
  const double irf = 1e-4 * 2.0 * std::numbers::pi * 1e-3 / PhysicalConstants::mu0;
  a.wires.push_back({InfiniteLine{Vec3::Zero(), Vec3::UnitX()}, 0.0, irf, 0.0});
  a.bias = bias;
  return a;
}

const Vec3 kProbe(0, 1e-3, 0);

}  // namespace

TEST_SUITE("dressed") {
  TEST_CASE("detuning") {
    const DressedParams p = test::params();
    const double bres = p.resonance_field();
    WireAssembly a;
    a.bias = Vec3(0, 0, bres);
    CHECK(std::abs(detuning(p, a, Vec3::Zero())) <= 1e-9 * p.drive.omega());
    a.bias = Vec3(2.0 * bres, 0, 0);
    CHECK(rel(detuning(p, a, Vec3::Zero()), p.drive.omega()) <= 1e-12);

    const WireAssembly w = single_wire(0.0925, 0.0);
    const double rres = PhysicalConstants::mu0 * 0.0925 / (2.0 * std::numbers::pi * bres);
    CHECK(rres == doctest::Approx(1.6183e-4).epsilon(1e-4));
    CHECK(rel(detuning(p, w, Vec3(0, 0.5 * rres, 0)), p.drive.omega()) <= 1e-12);
  }

  TEST_CASE("Rabi frequency uses the RF component perpendicular to the static field") {
    const DressedParams p = test::params();
    CHECK(rabi_frequency(p, rf_probe(Vec3(0, 0, 1e-4)), kProbe) <= 1e-3);
    const double perp = rabi_frequency(p, rf_probe(Vec3(1e-4, 0, 0)), kProbe);
    CHECK(perp == doctest::Approx(2.1986e6).epsilon(1e-4));
    CHECK(rel(perp, 0.5 * PhysicalConstants::muB * 1e-4 / (2.0 * PhysicalConstants::hbar)) <= 1e-12);
    const double tilted = rabi_frequency(p, rf_probe(Vec3(1e-4, 0, 1e-4)), kProbe);
    CHECK(rel(tilted, perp / std::sqrt(2.0)) <= 1e-12);
  }

  TEST_CASE("potential values") {
    const DressedParams p = test::params();
    const double bres = p.resonance_field();
    // Resonance with the perpendicular 1e-4 T RF field: U = 2 hbar Omega.
    const PotentialSample s = dressed_potential(p, rf_probe(Vec3(bres, 0, 0)), kProbe);
    CHECK(std::abs(s.delta) <= 1e-9 * p.drive.omega());
    CHECK(s.U == doctest::Approx(4.637e-28).epsilon(1e-3));
    CHECK(rel(s.U, 2.0 * PhysicalConstants::hbar * s.rabi) <= 1e-12);

    // No RF: U = mTilde hbar |delta|.
    const WireAssembly w = single_wire(0.0925, 0.0, Vec3(0, 0, 0));
    const PotentialSample d = dressed_potential(p, w, Vec3(0, 1e-4, 2e-5));
    CHECK(d.rabi == 0.0);
    CHECK(rel(d.U, 2.0 * PhysicalConstants::hbar * std::abs(d.delta)) <= 1e-12);

    WireAssembly flat;
    flat.bias = Vec3(0, bres, 0);
    CHECK(std::abs(dressed_potential(p, flat, Vec3::Zero()).U) <= 1e-9 * PhysicalConstants::hbar * p.drive.omega());
  }

  TEST_CASE("sample invariants: U^2 = (mTilde hbar)^2 (delta^2 + Omega^2)") {
    const DressedParams p = test::params();
    const WireAssembly a = crossed_wires();
    for (int n = 0; n < 200; ++n) {
      const Vec3 x = test::uniform_vec(-6e-4, 4e-4);
      if (inside_any_fence(a, x)) continue;
      const PotentialSample s = dressed_potential(p, a, x);
      const double expected = 4.0 * PhysicalConstants::hbar * PhysicalConstants::hbar * (s.delta * s.delta + s.rabi * s.rabi);
      CHECK(rel(s.U * s.U, expected) <= 1e-12);
      CHECK(s.rabi >= 0.0);
      CHECK(s.bMag >= 0.0);
      CHECK(s.U >= 0.0);
    }
  }

  TEST_CASE("analytic gradient matches central differences") {
    const DressedParams p = test::params();
    const WireAssembly a = crossed_wires();
    int checked = 0;
    while (checked < 150) {
      const Vec3 x = test::uniform_vec(-6e-4, 3e-4);
      double L = 1e9;
      for (const Wire& w : a.wires) L = std::min(L, distance_to_wire(w.geometry, x));
      if (L < 1e-5) continue;
      const PotentialSample s = dressed_potential(p, a, x);
      if (std::hypot(s.delta, s.rabi) < 1e-3 * p.drive.omega()) continue;
      const double h = 1e-9;  // U curves on a sub-micron scale near resonance
      Vec3 fd;
      for (int k = 0; k < 3; ++k) {
        const Vec3 e = Vec3::Unit(k) * h;
        fd[k] = (potential_value(p, a, x + e) - potential_value(p, a, x - e)) / (2.0 * h);
      }
      CHECK((potential_gradient(p, a, x) - fd).norm() / fd.norm() <= 1e-6);
      ++checked;
    }
  }

  TEST_CASE("gradient symmetry cases") {
    const DressedParams p = test::params();
    WireAssembly flat;
    flat.bias = Vec3(1e-4, 2e-5, 0);
    CHECK(potential_gradient(p, flat, Vec3(1e-4, 0, 3e-4)).norm() == 0.0);

    // Axial (Ioffe) bias: |B_DC| and |B_RF,perp| depend on rho only.
    const WireAssembly w = single_wire(0.0925, 0.05, Vec3(2e-5, 0, 0));
    const double rres = 1.6183e-4;
    for (double phi : {0.3, 1.7, 4.0}) {
      const Vec3 radial(0, std::cos(phi), std::sin(phi));
      const Vec3 azimuthal(0, -std::sin(phi), std::cos(phi));
      const Vec3 g = potential_gradient(p, w, Vec3(1e-5, 0, 0) + rres * radial);
      CHECK(std::abs(g.dot(azimuthal)) <= 1e-9 * g.norm() + 1e-40);
    }
  }

  TEST_CASE("scaling: currents, bias and omega times alpha scale delta, Omega and U by alpha") {
    const WireAssembly a = crossed_wires();
    for (int n = 0; n < 50; ++n) {
      const double alpha = test::uniform(0.2, 5.0);
      WireAssembly s = a;
      for (Wire& w : s.wires) {
        w.idc *= alpha;
        w.irf *= alpha;
      }
      s.bias *= alpha;
      s.drive = RFDrive(a.drive.frequency() * alpha);
      const DressedParams p = test::params(), q = test::params(a.drive.frequency() * alpha);
      const Vec3 x = test::uniform_vec(-6e-4, 3e-4);
      if (inside_any_fence(a, x)) continue;
      const PotentialSample u = dressed_potential(p, a, x), v = dressed_potential(q, s, x);
      const double scale = alpha * a.drive.omega();
      CHECK(std::abs(v.delta - alpha * u.delta) <= 1e-12 * scale);
      CHECK(std::abs(v.rabi - alpha * u.rabi) <= 1e-12 * scale);
      CHECK(std::abs(v.U - alpha * u.U) <= 1e-12 * scale * PhysicalConstants::hbar * 2.0);
    }
  }

  TEST_CASE("sign law: negating mTilde negates U and its gradient") {
    const WireAssembly a = crossed_wires();
    DressedParams p = test::params(), q = test::params();
    q.species.mTilde = -q.species.mTilde;
    for (int n = 0; n < 50; ++n) {
      const Vec3 x = test::uniform_vec(-6e-4, 3e-4);
      if (inside_any_fence(a, x)) continue;
      const PotentialSample u = dressed_potential(p, a, x), v = dressed_potential(q, a, x);
      CHECK(v.U == -u.U);
      CHECK((v.grad + u.grad).norm() == 0.0);
    }
  }

  TEST_CASE("errors: field zero, conical point, drive mismatch") {
    const DressedParams p = test::params();
    WireAssembly zero;
    try {
      dressed_potential(p, zero, Vec3::Zero());
      FAIL("expected quantization-axis error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::QuantizationAxis);
    }
    // Single wire without bias: B_RF parallel to B_DC, so Omega = 0 and the
    // resonance cylinder is a line of conical points.
    const WireAssembly w = single_wire(0.0925, 0.05);
    const double rres = PhysicalConstants::mu0 * 0.0925 / (2.0 * std::numbers::pi * p.resonance_field());
    const PotentialSample s = dressed_potential(p, w, Vec3(0, rres, 0));
    CHECK(s.U <= 1e-12 * PhysicalConstants::hbar * p.drive.omega());
    try {
      potential_gradient(p, w, Vec3(0, rres, 0));
      FAIL("expected non-differentiable error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonDifferentiable);
    }
    CHECK_THROWS_AS(dressed_potential(test::params(1e6), crossed_wires(), Vec3(0, 1e-4, 1e-4)), Error);
  }
}
