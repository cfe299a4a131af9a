#pragma once

// RF-dressed adiabatic potential
//
//   U = s * mTilde * hbar * sqrt(delta^2 + Omega^2),   s = sign(gF)
//   delta = |gF| muB |B_DC| / hbar - omega
//   Omega = |gF| muB |B_RF,perp| / (2 hbar)
//
// B_RF,perp is the part of the RF amplitude vector orthogonal to the local
// static field, so an RF field parallel to B_DC does not couple. The formula is
// the rotating-wave, adiabatic dressed-state result with a directional Rabi
// coupling. With gF > 0 the prefactor is mTilde * hbar; the sign of gF * mTilde
// decides whether the trapped state sits in minima (weak-field seekers) or
// maxima (strong-field seekers) of the same surface.

#include "synapse/magnetostatics.hpp"
#include "synapse/model.hpp"

namespace synapse {

struct DressedParams {
  AtomSpecies species = default_species();
  RFDrive drive;

  /// |gF| muB / hbar, rad s^-1 T^-1.
  double gyromagnetic() const;
  double resonance_field() const { return synapse::resonance_field(species, drive); }
  /// Signed prefactor s * mTilde * hbar.
  double energy_prefactor() const;

  bool operator==(const DressedParams&) const = default;
};

struct PotentialSample {
  Vec3 p = Vec3::Zero();
  double U = 0.0;             // J
  Vec3 grad = Vec3::Zero();   // J/m; valid only when gradient_defined
  bool gradient_defined = false;
  double delta = 0.0;         // rad/s
  double rabi = 0.0;          // rad/s
  double bMag = 0.0;          // T
};

double detuning(const DressedParams& params, const WireAssembly& assembly, const Vec3& p);
double rabi_frequency(const DressedParams& params, const WireAssembly& assembly, const Vec3& p);

/// Full sample including the analytic gradient when it exists. Throws
/// Error(Singularity) inside a wire fence and Error(QuantizationAxis) where
/// |B_DC| is below the zero threshold.
PotentialSample dressed_potential(const DressedParams& params, const WireAssembly& assembly,
                                  const Vec3& p);

/// Analytic gradient; throws Error(NonDifferentiable) at delta = Omega = 0.
Vec3 potential_gradient(const DressedParams& params, const WireAssembly& assembly, const Vec3& p);

/// Potential energy only (no Jacobians).
double potential_value(const DressedParams& params, const WireAssembly& assembly, const Vec3& p);

}  // namespace synapse
