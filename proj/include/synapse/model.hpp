#pragma once

#include <numbers>
#include <string>

namespace synapse {

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
  static constexpr double mu0 = 1.25663706212e-6;    // T m / A
  static constexpr double hbar = 1.054571817e-34;    // J s
  static constexpr double h = 2.0 * std::numbers::pi * hbar;
  static constexpr double muB = 9.2740100783e-24;    // J / T
  static constexpr double kB = 1.380649e-23;         // J / K
};

/// Atom in a single dressed level. The sign of gF * mTilde selects weak-field
/// seekers (positive, trapped at minima of U) or strong-field seekers.
struct AtomSpecies {
  std::string name;
  double gF = 0.5;
  double mTilde = 2.0;
  double F = 2.0;
  double mass = 1.44316e-25;  // kg

  /// Throws Error(InvalidSpecies) on gF == 0, mass <= 0, |mTilde| > F or a
  /// non (half-)integer level index.
  void validate() const;
  bool weak_field_seeker() const { return gF * mTilde > 0.0; }

  bool operator==(const AtomSpecies&) const = default;
};

/// Rb-87-like weak-field seeker used when a scene does not name its atom.
AtomSpecies default_species();

class RFDrive {
 public:
  /// Upper end of the quasi-static regime.
  static constexpr double kQuasiStaticLimit = 1.0e6;  // Hz

  RFDrive() : RFDrive(0.8e6) {}
  explicit RFDrive(double frequency);

  double frequency() const { return frequency_; }
  double omega() const { return omega_; }
  /// Above 1 MHz the quasi-static field model is outside its validity range.
  /// This is a warning, never an error.
  bool beyond_quasi_static() const { return frequency_ > kQuasiStaticLimit; }

  bool operator==(const RFDrive&) const = default;

 private:
  double frequency_;
  double omega_;
};

/// |B| at which the Larmor frequency |gF| muB B / hbar equals the drive.
double resonance_field(const AtomSpecies& species, const RFDrive& drive);

struct EnergyReport {
  double joules = 0.0;
  double hertz = 0.0;
  double kelvin = 0.0;
};

EnergyReport energy_report(double joules);

}  // namespace synapse
