#pragma once

#include <optional>

#include "synapse/saddle.hpp"

namespace synapse {

/// full: climbing-image band on the dressed potential U.
/// geometric: band on V = s mTilde hbar omega h(|B| / B_res), h a bounded,
/// decreasing stand-in for -delta with h(1) = 0 that flattens out for
/// |B| >= 2 B_res. V < 0 inside the resonance tubes
/// and its saddle value is <= 0 exactly when the two tubes (delta >= 0
/// regions) touch, so the "barrier" is the signed saddle value.
enum class BarrierMode { Full, Geometric };

const char* to_string(BarrierMode mode);
BarrierMode parse_barrier_mode(const std::string& text);

struct BarrierOptions {
  BarrierMode mode = BarrierMode::Full;
  SaddleOptions saddle;
  std::optional<double> touch_tolerance;  // J; default 1e-3 x shallower well depth (full),
                                          // 1e-9 x |mTilde hbar omega| (geometric)
  double merge_distance = 0.0;            // m; 0 selects 1e-3 x seed separation
  int wire_a = 0;
  int wire_b = 1;
};

struct WellSeeds {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
};

/// Seeds on the common perpendicular of two infinite wires, one resonance
/// radius out from each axis towards the other wire (pulled in to 0.3 of the
/// separation when the radii overlap). Intersecting axes use dA x dB.
WellSeeds default_well_seeds(const DressedParams& params, const WireAssembly& assembly,
                             int wire_a = 0, int wire_b = 1);

/// Geometric-mode objective V and its gradient.
Objective resonance_objective(const DressedParams& params, const WireAssembly& assembly);

/// Descends the seeds to their wells, runs the saddle search and classifies
/// the result as touching when min(barrierA, barrierB) <= touch tolerance.
/// Seeds that descend into one minimum report merged = touching = true.
BarrierResult barrier_height(const DressedParams& params, const WireAssembly& assembly,
                             const Vec3& seed_a, const Vec3& seed_b,
                             const BarrierOptions& options = {});

/// Same, with default_well_seeds (full) or in-tube endpoints (geometric).
BarrierResult barrier_height(const DressedParams& params, const WireAssembly& assembly,
                             const BarrierOptions& options = {});

}  // namespace synapse
