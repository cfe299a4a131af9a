#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synapse/dressed.hpp"

namespace synapse {

struct ParticleState {
  Vec3 position = Vec3::Zero();  // m
  Vec3 velocity = Vec3::Zero();  // m/s
  double time = 0.0;             // s
};

/// Piecewise-linear bias B(t); held constant before the first and after the
/// last knot.
class BiasSchedule {
 public:
  BiasSchedule() = default;
  explicit BiasSchedule(std::vector<std::pair<double, Vec3>> knots);
  static BiasSchedule constant(const Vec3& bias) { return BiasSchedule({{0.0, bias}}); }

  Vec3 at(double t) const;
  /// dB/dt at t (right derivative at knots).
  Vec3 rate(double t) const;
  bool is_static() const;
  const std::vector<std::pair<double, Vec3>>& knots() const { return knots_; }

  bool operator==(const BiasSchedule&) const = default;

 private:
  std::vector<std::pair<double, Vec3>> knots_;
};

enum class Termination { TimeLimit, DomainExit, Fence, Adiabaticity, Transferred };

const char* to_string(Termination reason);

struct TrajectoryOptions {
  double dt = 0.0;      // s
  double t_max = 0.0;   // s
  std::optional<Box> domain;
  double eta_max = 0.1;
  bool record = true;   // keep every state; otherwise first and last only
  /// Stop with Transferred as soon as the particle enters one of these basins.
  std::vector<int> stop_basins;
  double basin_threshold = 2.0;
};

struct Trajectory {
  std::vector<ParticleState> states;
  std::vector<double> U;    // J, per state
  std::vector<double> eta;  // per state
  Termination reason = Termination::TimeLimit;
  double max_eta = 0.0;
  int steps = 0;
};

/// Velocity Verlet for m a = -grad U(x, t), with U re-evaluated under the
/// scheduled bias at every force evaluation. Throws Error(InvalidArgument) for
/// a start inside a wire fence or non-positive dt / t_max.
Trajectory integrate_trajectory(const DressedParams& params, const WireAssembly& assembly,
                                const BiasSchedule& schedule, const ParticleState& start,
                                const TrajectoryOptions& options);

/// Index of the wire whose scaled radius rho_i / rho_res,i is smallest and
/// below `threshold`; ties go to the lower index; -1 when no wire qualifies.
int classify_basin(const DressedParams& params, const WireAssembly& assembly, const Vec3& p,
                   double threshold = 2.0);

/// eta = |d(B_hat)/dt| / sqrt(delta^2 + Omega^2) for a particle at p moving
/// with velocity v, with dB/dt = J_B v + bias_rate. Infinite at field zeros and
/// at delta = Omega = 0.
double adiabaticity_metric(const DressedParams& params, const WireAssembly& assembly, const Vec3& p,
                           const Vec3& v, const Vec3& bias_rate = Vec3::Zero());

/// Harmonic period 2 pi / sqrt(k_max / m) from the finite-difference Hessian
/// at a well minimum; the default time step is a 200th of it.
double trap_period(const DressedParams& params, const WireAssembly& assembly, const Vec3& minimum);
double default_time_step(const DressedParams& params, const WireAssembly& assembly, const Vec3& minimum);

struct SeedSpec {
  int wire = 0;
  int particles = 100;
  double thermal_speed = 0.01;  // m/s, per-component standard deviation
  std::uint64_t seed = 1;
  /// Particles start on the wire's minimum surface within this axial
  /// distance of the point closest to the other wires; 0 selects 2 rho_res.
  double axial_window = 0.0;
};

struct TransferStats {
  int particles = 0;
  int transferred = 0;
  int lost = 0;
  double mean_transfer_time = 0.0;  // s, over transferred particles; 0 when none
  double max_eta = 0.0;
  double max_initial_energy = 0.0;  // J, U + kinetic at the start
  std::vector<Termination> outcomes;
};

/// Deterministic in seed.seed and independent of the worker count: particle i
/// draws from its own generator seeded by a SplitMix64 hash of (seed, i).
TransferStats ensemble_transfer(const DressedParams& params, const WireAssembly& assembly,
                                const BiasSchedule& schedule, const SeedSpec& seed, double dt,
                                double t_max, const TrajectoryOptions& base = {}, int workers = 0);

/// Initial states used by ensemble_transfer.
std::vector<ParticleState> seed_particles(const DressedParams& params, const WireAssembly& assembly,
                                          const SeedSpec& seed);

}  // namespace synapse
