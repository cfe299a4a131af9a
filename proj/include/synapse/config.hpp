#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "synapse/barrier.hpp"
#include "synapse/dynamics.hpp"
#include "synapse/grid.hpp"

namespace synapse {

struct AnalysisConfig {
  std::optional<GridSpec> grid;
  std::string vary = "idc";
  double bracket_lo = 0.04;  // A
  double bracket_hi = 0.2;   // A
  double tol_param = 1e-5;
  BarrierMode mode = BarrierMode::Full;
  std::optional<double> touch_tolerance;  // J
  int images = 15;
  int max_iterations = 6000;
  double eta_max = 0.1;
  double basin_threshold = 2.0;

  bool operator==(const AnalysisConfig&) const = default;
};

struct DynamicsConfig {
  int seed_wire = 0;
  int particles = 100;
  double thermal_speed = 0.01;  // m/s
  double dt = 0.0;              // s; 0 selects trap period / 200
  double t_max = 0.02;          // s
  double axial_window = 0.0;    // m; 0 selects 2 rho_res

  bool operator==(const DynamicsConfig&) const = default;
};

/// A scene file (YAML). Top-level sections:
///
///   species:    name, gF, F, mTilde, mass                       (all required)
///   drive:      frequency [Hz]                                  (required)
///   wires:      list of {type: line, point, direction} or
///               {type: polyline, vertices}, plus idc, irf [A] and
///               optional rfPhase [rad]                           (required)
///   bias:       [Bx, By, Bz] in T            } exactly one of these;
///   biasSchedule: list of {t [s], bias [T]}  } the schedule's first knot is the static bias
///   tolerances: exclusionRadius [m], zeroThreshold [T]         (optional)
///   analysis:   grid {origin, extents, resolution}, vary, bracket, tolParam,
///               mode, touchTolerance, images, maxIterations, etaMax,
///               basinThreshold                                  (optional)
///   dynamics:   seedWire, particles, thermalSpeed, dt, tMax, axialWindow
///   rng:        seed                                            (optional)
///
/// Unknown keys anywhere are errors.
struct SceneConfig {
  AtomSpecies species;
  RFDrive drive;
  std::vector<Wire> wires;
  Vec3 bias = Vec3::Zero();
  std::optional<BiasSchedule> schedule;
  FieldTolerances tolerances;
  AnalysisConfig analysis;
  DynamicsConfig dynamics;
  std::uint64_t seed = 1;

  DressedParams params() const { return {species, drive}; }
  WireAssembly assembly() const;
  BiasSchedule bias_schedule() const { return schedule ? *schedule : BiasSchedule::constant(bias); }

  bool operator==(const SceneConfig&) const = default;
};

/// Throws ConfigError naming the key (dotted path) and, when known, the line.
SceneConfig parse_config(std::string_view text);
SceneConfig load_config(const std::string& path);

/// Canonical YAML; parse_config(to_yaml(c)) == c, doubles in shortest
/// round-trip form.
std::string to_yaml(const SceneConfig& config);

std::string format_double(double value);

/// The bundled crossed-wire scene (f = 0.8 MHz, iDC = 0.0925 A, iRF = 0.05 A).
std::string_view default_scene_text();

}  // namespace synapse
