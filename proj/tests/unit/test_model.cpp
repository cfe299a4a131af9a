#include <doctest.h>

#include "support.hpp"
#include "synapse/error.hpp"
#include "synapse/model.hpp"

using namespace synapse;

TEST_SUITE("model") {
  TEST_CASE("resonance field of the default species at 0.8 MHz") {
    // hbar omega / (|gF| muB)
    const double expected = PhysicalConstants::hbar * 2.0 * std::numbers::pi * 0.8e6 / (0.5 * PhysicalConstants::muB);
    CHECK(resonance_field(default_species(), RFDrive(0.8e6)) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(resonance_field(default_species(), RFDrive(0.8e6)) == doctest::Approx(1.1432e-4).epsilon(1e-4));
  }

  TEST_CASE("species validation") {
    AtomSpecies s = default_species();
    CHECK_NOTHROW(s.validate());
    CHECK(s.weak_field_seeker());
    s.gF = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = default_species();
    s.mass = -1.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = default_species();
    s.mTilde = 3.0;  // beyond F = 2
    CHECK_THROWS_AS(s.validate(), Error);
    s = default_species();
    s.mTilde = -2.0;
    CHECK_NOTHROW(s.validate());
    CHECK_FALSE(s.weak_field_seeker());
  }

  TEST_CASE("drive frequency must be positive") {
    CHECK_THROWS_AS(RFDrive(0.0), Error);
    CHECK_THROWS_AS(RFDrive(-1.0), Error);
    CHECK(RFDrive(0.8e6).omega() == doctest::Approx(2.0 * std::numbers::pi * 0.8e6));
    CHECK_FALSE(RFDrive(0.8e6).beyond_quasi_static());
    CHECK(RFDrive(2e6).beyond_quasi_static());
  }

  TEST_CASE("energy report units") {
    const EnergyReport e = energy_report(PhysicalConstants::kB * 1e-6);
    CHECK(e.kelvin == doctest::Approx(1e-6));
    CHECK(e.hertz == doctest::Approx(PhysicalConstants::kB * 1e-6 / PhysicalConstants::h));
  }
}
