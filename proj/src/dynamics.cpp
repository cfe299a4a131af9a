#include "synapse/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "synapse/minimum_surface.hpp"
#include "synapse/optimize.hpp"
#include "synapse/parallel.hpp"
#include "synapse/saddle.hpp"

namespace synapse {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Force {
  Vec3 acceleration;
  double U;
  double eta;
};

WireAssembly at_time(const WireAssembly& assembly, const BiasSchedule& schedule, double t) {
  WireAssembly a = assembly;
  if (!schedule.knots().empty()) a.bias = schedule.at(t);
  return a;
}

}  // namespace

BiasSchedule::BiasSchedule(std::vector<std::pair<double, Vec3>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw Error(ErrorCode::InvalidArgument, "bias schedule needs at least one knot");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].first) || !knots_[i].second.allFinite()) {
      throw Error(ErrorCode::InvalidArgument, "bias schedule knots must be finite");
    }
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first)) {
      throw Error(ErrorCode::InvalidArgument, "bias schedule times must increase strictly");
    }
  }
}

Vec3 BiasSchedule::at(double t) const {
  if (knots_.empty()) return Vec3::Zero();
  if (t <= knots_.front().first) return knots_.front().second;
  if (t >= knots_.back().first) return knots_.back().second;
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const auto& k) { return v < k.first; });
  const auto lo = hi - 1;
  const double s = (t - lo->first) / (hi->first - lo->first);
  return (1.0 - s) * lo->second + s * hi->second;
}

Vec3 BiasSchedule::rate(double t) const {
  if (knots_.size() < 2 || t < knots_.front().first || t >= knots_.back().first) return Vec3::Zero();
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const auto& k) { return v < k.first; });
  const auto lo = hi - 1;
  return (hi->second - lo->second) / (hi->first - lo->first);
}

bool BiasSchedule::is_static() const {
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].second != knots_[0].second) return false;
  }
  return true;
}

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::TimeLimit: return "time-limit";
    case Termination::DomainExit: return "domain-exit";
    case Termination::Fence: return "fence";
    case Termination::Adiabaticity: return "adiabaticity";
    case Termination::Transferred: return "transferred";
  }
  return "?";
}

double adiabaticity_metric(const DressedParams& params, const WireAssembly& assembly, const Vec3& p,
                           const Vec3& v, const Vec3& bias_rate) {
  const FieldJet jet = b_dc_jet(assembly, p);
  const double b = jet.value.norm();
  if (b < assembly.tolerances.zero_threshold) return std::numeric_limits<double>::infinity();
  const Vec3 n = jet.value / b;
  const Vec3 dB = jet.jacobian * v + bias_rate;
  const double turn = (dB - n * n.dot(dB)).norm() / b;
  if (turn == 0.0) return 0.0;
  const double delta = params.gyromagnetic() * b - params.drive.omega();
  const double rabi = rabi_frequency(params, assembly, p);
  const double root = std::hypot(delta, rabi);
  return root > 0.0 ? turn / root : std::numeric_limits<double>::infinity();
}

Trajectory integrate_trajectory(const DressedParams& params, const WireAssembly& assembly,
                                const BiasSchedule& schedule, const ParticleState& start,
                                const TrajectoryOptions& options) {
  if (!(options.dt > 0.0) || !(options.t_max > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "trajectory needs dt > 0 and t_max > 0");
  }
  if (!start.position.allFinite() || !start.velocity.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "particle state must be finite");
  }
  if (inside_any_fence(assembly, start.position)) {
    throw Error(ErrorCode::InvalidArgument, "particle starts inside a wire fence");
  }
  const double mass = params.species.mass;

  // nullopt carries the termination reason instead.
  Termination failure = Termination::Fence;
  const auto force = [&](const Vec3& x, const Vec3& v, double t) -> std::optional<Force> {
    const WireAssembly a = at_time(assembly, schedule, t);
    try {
      const PotentialSample s = dressed_potential(params, a, x);
      if (!s.gradient_defined) {
        failure = Termination::Adiabaticity;
        return std::nullopt;
      }
      return Force{-s.grad / mass, s.U, adiabaticity_metric(params, a, x, v, schedule.rate(t))};
    } catch (const Error& e) {
      failure = e.code() == ErrorCode::Singularity ? Termination::Fence : Termination::Adiabaticity;
      return std::nullopt;
    }
  };

  Trajectory traj;
  ParticleState s = start;
  auto f = force(s.position, s.velocity, s.time);
  if (!f) throw Error(ErrorCode::InvalidArgument, "particle starts where the potential is undefined");
  const auto push = [&](const ParticleState& st, const Force& fo) {
    traj.states.push_back(st);
    traj.U.push_back(fo.U);
    traj.eta.push_back(fo.eta);
  };
  push(s, *f);
  traj.max_eta = f->eta;

  const double dt = options.dt;
  const long long n = static_cast<long long>(std::ceil(options.t_max / dt - 1e-9));
  traj.reason = Termination::TimeLimit;
  for (long long k = 0; k < n; ++k) {
    const double h = k + 1 == n ? options.t_max - (s.time - start.time) : dt;
    const Vec3 x = s.position + h * s.velocity + 0.5 * h * h * f->acceleration;
    const Vec3 vhalf = s.velocity + 0.5 * h * f->acceleration;
    // eta is evaluated with the half-step velocity; the recorded value is
    // refreshed with the final velocity below.
    auto g = force(x, vhalf, s.time + h);
    if (!g) {
      traj.reason = failure;
      break;
    }
    s.position = x;
    s.velocity = vhalf + 0.5 * h * g->acceleration;
    s.time = start.time + (k + 1 == n ? options.t_max : (k + 1) * dt);
    const WireAssembly a = at_time(assembly, schedule, s.time);
    try {
      g->eta = adiabaticity_metric(params, a, s.position, s.velocity, schedule.rate(s.time));
    } catch (const Error&) {
      g->eta = std::numeric_limits<double>::infinity();
    }
    f = g;
    ++traj.steps;
    traj.max_eta = std::max(traj.max_eta, f->eta);
    if (options.record) push(s, *f);

    if (!(f->eta <= options.eta_max)) {
      traj.reason = Termination::Adiabaticity;
      break;
    }
    if (options.domain && !options.domain->contains(s.position)) {
      traj.reason = Termination::DomainExit;
      break;
    }
    if (!options.stop_basins.empty()) {
      const int basin = classify_basin(params, a, s.position, options.basin_threshold);
      if (std::find(options.stop_basins.begin(), options.stop_basins.end(), basin) != options.stop_basins.end()) {
        traj.reason = Termination::Transferred;
        break;
      }
    }
  }
  if (!options.record && traj.steps > 0) push(s, *f);
  return traj;
}

int classify_basin(const DressedParams& params, const WireAssembly& assembly, const Vec3& p,
                   double threshold) {
  int best = -1;
  double best_ratio = threshold;
  for (int i = 0; i < static_cast<int>(assembly.wires.size()); ++i) {
    const double rr = resonance_radius(params, assembly.wires[i]);
    if (!(rr > 0.0)) continue;
    const double ratio = distance_to_wire(assembly.wires[i].geometry, p) / rr;
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return best;
}

double trap_period(const DressedParams& params, const WireAssembly& assembly, const Vec3& minimum) {
  const Objective f = dressed_objective(params, assembly);
  double scale = std::numeric_limits<double>::infinity();
  for (const Wire& w : assembly.wires) scale = std::min(scale, distance_to_wire(w.geometry, minimum));
  const Mat3 H = finite_difference_hessian(f, minimum, 1e-4 * scale);
  const double kmax = Eigen::SelfAdjointEigenSolver<Mat3>(H).eigenvalues().maxCoeff();
  if (!(kmax > 0.0)) throw Error(ErrorCode::InvalidArgument, "point is not inside a trap");
  return 2.0 * std::numbers::pi / std::sqrt(kmax / params.species.mass);
}

double default_time_step(const DressedParams& params, const WireAssembly& assembly, const Vec3& minimum) {
  return trap_period(params, assembly, minimum) / 200.0;
}

std::vector<ParticleState> seed_particles(const DressedParams& params, const WireAssembly& assembly,
                                          const SeedSpec& seed) {
  if (seed.wire < 0 || seed.wire >= static_cast<int>(assembly.wires.size())) {
    throw Error(ErrorCode::InvalidArgument, "seed wire index out of range");
  }
  if (seed.particles < 0 || !(seed.thermal_speed >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "seed needs a non-negative particle count and speed");
  }
  const Wire& wire = assembly.wires[seed.wire];
  const double rr = resonance_radius(params, wire);
  const double window = seed.axial_window > 0.0 ? seed.axial_window : 2.0 * rr;

  // Axial centre: the foot of the common perpendicular to the nearest other line.
  double centre = 0.0;
  if (const auto* line = std::get_if<InfiniteLine>(&wire.geometry)) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(assembly.wires.size()); ++j) {
      const auto* other = j == seed.wire ? nullptr : std::get_if<InfiniteLine>(&assembly.wires[j].geometry);
      if (!other || line->direction.cross(other->direction).norm() < 1e-12) continue;
      const auto [pa, pb] = closest_axis_points(*line, *other);
      if ((pb - pa).norm() < nearest) {
        nearest = (pb - pa).norm();
        centre = (pa - line->point).dot(line->direction);
      }
    }
  }

  RadialRange range;
  range.r_min = 0.05 * rr;
  range.r_max = 2.0 * rr;  // stay inside the wire's own basin
  range.tolerance = 1e-9 * rr;

  std::vector<ParticleState> states(seed.particles);
  for (int i = 0; i < seed.particles; ++i) {
    std::mt19937_64 rng(splitmix64(seed.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      const double azimuth = 2.0 * std::numbers::pi * unit(rng);
      const double axial = centre + window * (2.0 * unit(rng) - 1.0);
      try {
        states[i].position = radial_trap_minimum(params, assembly, seed.wire, azimuth, axial, range).position;
        placed = classify_basin(params, assembly, states[i].position) == seed.wire;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotFound && e.code() != ErrorCode::QuantizationAxis) throw;
      }
    }
    if (!placed) throw Error(ErrorCode::NotFound, "no minimum-surface point found to seed a particle");
    for (int k = 0; k < 3; ++k) states[i].velocity[k] = seed.thermal_speed * normal(rng);
  }
  return states;
}

TransferStats ensemble_transfer(const DressedParams& params, const WireAssembly& assembly,
                                const BiasSchedule& schedule, const SeedSpec& seed, double dt,
                                double t_max, const TrajectoryOptions& base, int workers) {
  const std::vector<ParticleState> starts = seed_particles(params, assembly, seed);
  TrajectoryOptions options = base;
  options.dt = dt;
  options.t_max = t_max;
  options.record = false;
  options.stop_basins.clear();
  for (int j = 0; j < static_cast<int>(assembly.wires.size()); ++j) {
    if (j != seed.wire) options.stop_basins.push_back(j);
  }

  const std::size_t n = starts.size();
  std::vector<Termination> outcome(n, Termination::TimeLimit);
  std::vector<double> when(n, 0.0), eta(n, 0.0), energy(n, 0.0);
  parallel_for(n, workers, [&](std::size_t i) {
    const WireAssembly a0 = at_time(assembly, schedule, starts[i].time);
    energy[i] = potential_value(params, a0, starts[i].position) +
                0.5 * params.species.mass * starts[i].velocity.squaredNorm();
    const Trajectory t = integrate_trajectory(params, assembly, schedule, starts[i], options);
    outcome[i] = t.reason;
    when[i] = t.states.back().time - starts[i].time;
    eta[i] = t.max_eta;
  });

  TransferStats stats;
  stats.particles = static_cast<int>(n);
  stats.outcomes = outcome;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (outcome[i] == Termination::Transferred) {
      ++stats.transferred;
      total += when[i];
    } else if (outcome[i] != Termination::TimeLimit) {
      ++stats.lost;
    }
    stats.max_eta = std::max(stats.max_eta, eta[i]);
    stats.max_initial_energy = i == 0 ? energy[i] : std::max(stats.max_initial_energy, energy[i]);
  }
  if (stats.transferred > 0) stats.mean_transfer_time = total / stats.transferred;
  return stats;
}

}  // namespace synapse
