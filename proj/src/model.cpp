#include "synapse/model.hpp"

#include <cmath>

#include "synapse/error.hpp"

namespace synapse {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidSpecies: return "invalid-species";
    case ErrorCode::Singularity: return "singularity";
    case ErrorCode::QuantizationAxis: return "undefined-quantization-axis";
    case ErrorCode::NonDifferentiable: return "non-differentiable-point";
    case ErrorCode::Unsupported: return "unsupported-configuration";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::NoBracket: return "no-bracket";
    case ErrorCode::NotConverged: return "not-converged";
    case ErrorCode::EmptyMesh: return "empty-mesh";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

void AtomSpecies::validate() const {
  if (!(gF != 0.0) || !std::isfinite(gF)) {
    throw Error(ErrorCode::InvalidSpecies, "species '" + name + "': gF must be finite and non-zero");
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorCode::InvalidSpecies, "species '" + name + "': mass must be positive");
  }
  if (!(F >= 0.0) || std::abs(2.0 * F - std::round(2.0 * F)) > 1e-12) {
    throw Error(ErrorCode::InvalidSpecies, "species '" + name + "': F must be a non-negative (half-)integer");
  }
  if (std::abs(mTilde) > F || std::abs(2.0 * mTilde - std::round(2.0 * mTilde)) > 1e-12) {
    throw Error(ErrorCode::InvalidSpecies,
                "species '" + name + "': mTilde must be a (half-)integer with |mTilde| <= F");
  }
}

AtomSpecies default_species() {
  return AtomSpecies{"Rb87", 0.5, 2.0, 2.0, 1.44316e-25};
}

RFDrive::RFDrive(double frequency)
    : frequency_(frequency), omega_(2.0 * std::numbers::pi * frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw Error(ErrorCode::InvalidArgument, "drive frequency must be positive and finite");
  }
}

double resonance_field(const AtomSpecies& species, const RFDrive& drive) {
  if (species.gF == 0.0) {
    throw Error(ErrorCode::InvalidSpecies, "resonance field undefined for gF = 0");
  }
  return PhysicalConstants::hbar * drive.omega() / (std::abs(species.gF) * PhysicalConstants::muB);
}

EnergyReport energy_report(double joules) {
  return {joules, joules / PhysicalConstants::h, joules / PhysicalConstants::kB};
}

}  // namespace synapse
