#include "synapse/dressed.hpp"

#include <cmath>

#include "synapse/error.hpp"

namespace synapse {
namespace {

void check_drive(const DressedParams& params, const WireAssembly& assembly) {
  if (params.drive.frequency() != assembly.drive.frequency()) {
    throw Error(ErrorCode::InvalidArgument,
                "dressed parameters and wire assembly disagree on the drive frequency");
  }
}

Vec3 checked_dc(const WireAssembly& assembly, const Vec3& p) {
  Vec3 b = b_dc(assembly, p);
  if (!(b.norm() >= assembly.tolerances.zero_threshold)) {
    throw Error(ErrorCode::QuantizationAxis,
                "static field below the zero threshold: no quantization axis");
  }
  return b;
}

}  // namespace

double DressedParams::gyromagnetic() const {
  return std::abs(species.gF) * PhysicalConstants::muB / PhysicalConstants::hbar;
}

double DressedParams::energy_prefactor() const {
  return (species.gF > 0.0 ? 1.0 : -1.0) * species.mTilde * PhysicalConstants::hbar;
}

double detuning(const DressedParams& params, const WireAssembly& assembly, const Vec3& p) {
  check_drive(params, assembly);
  return params.gyromagnetic() * b_dc(assembly, p).norm() - params.drive.omega();
}

double rabi_frequency(const DressedParams& params, const WireAssembly& assembly, const Vec3& p) {
  check_drive(params, assembly);
  const Vec3 b = checked_dc(assembly, p);
  const Vec3 rf = b_rf_amplitude(assembly, p);
  const Vec3 n = b / b.norm();
  return 0.5 * params.gyromagnetic() * (rf - n * n.dot(rf)).norm();
}

double potential_value(const DressedParams& params, const WireAssembly& assembly, const Vec3& p) {
  check_drive(params, assembly);
  const Vec3 b = checked_dc(assembly, p);
  const Vec3 rf = b_rf_amplitude(assembly, p);
  const double bmag = b.norm();
  const Vec3 n = b / bmag;
  const double gamma = params.gyromagnetic();
  const double delta = gamma * bmag - params.drive.omega();
  const double rabi = 0.5 * gamma * (rf - n * n.dot(rf)).norm();
  return params.energy_prefactor() * std::hypot(delta, rabi);
}

PotentialSample dressed_potential(const DressedParams& params, const WireAssembly& assembly,
                                  const Vec3& p) {
  check_drive(params, assembly);
  const FieldJet dc = b_dc_jet(assembly, p);
  const double bmag = dc.value.norm();
  if (!(bmag >= assembly.tolerances.zero_threshold)) {
    throw Error(ErrorCode::QuantizationAxis,
                "static field below the zero threshold: no quantization axis");
  }
  const FieldJet rf = b_rf_jet(assembly, p);

  const double gamma = params.gyromagnetic();
  const Vec3 n = dc.value / bmag;
  const double n_rf = n.dot(rf.value);
  const Vec3 perp = rf.value - n * n_rf;

  PotentialSample s;
  s.p = p;
  s.bMag = bmag;
  s.delta = gamma * bmag - params.drive.omega();
  s.rabi = 0.5 * gamma * perp.norm();
  const double root = std::hypot(s.delta, s.rabi);
  s.U = params.energy_prefactor() * root;

  // delta^2 + Omega^2 vanishes only on a conical point; Omega^2 itself is smooth.
  if (root > 1e-12 * params.drive.omega()) {
    const Vec3 grad_b = dc.jacobian.transpose() * n;
    const Vec3 grad_nrf = rf.jacobian.transpose() * n + dc.jacobian.transpose() * perp / bmag;
    const Vec3 grad_perp2 = 2.0 * rf.jacobian.transpose() * rf.value - 2.0 * n_rf * grad_nrf;
    const Vec3 grad_s = 2.0 * s.delta * gamma * grad_b + 0.25 * gamma * gamma * grad_perp2;
    s.grad = params.energy_prefactor() * grad_s / (2.0 * root);
    s.gradient_defined = true;
  }
  return s;
}

Vec3 potential_gradient(const DressedParams& params, const WireAssembly& assembly, const Vec3& p) {
  const PotentialSample s = dressed_potential(params, assembly, p);
  if (!s.gradient_defined) {
    throw Error(ErrorCode::NonDifferentiable,
                "potential is conical here (delta = Omega = 0); gradient undefined");
  }
  return s.grad;
}

}  // namespace synapse
