#pragma once

#include "synapse/magnetostatics.hpp"

namespace synapse {

/// Two crossed infinite wires: wire 0 along +x through the origin, wire 1 along
/// +y through (0, 0, -gap). Both carry the same DC and RF currents.
struct CrossedSceneOptions {
  double idc = 0.0925;
  double irf = 0.05;
  double gap = 3.5e-4;
  Vec3 bias = Vec3(-3.0e-5, -3.0e-5, 0.0);
  double frequency = 0.8e6;
};

WireAssembly crossed_wires(const CrossedSceneOptions& options = {});

/// One infinite wire along +x through the origin.
WireAssembly single_wire(double idc, double irf, const Vec3& bias = Vec3::Zero(),
                         double frequency = 0.8e6);

/// Two co-directed wires along +x at y = -separation/2 and y = +separation/2.
WireAssembly parallel_wires(double separation, double idc, double irf,
                            const Vec3& bias = Vec3::Zero(), double frequency = 0.8e6);

}  // namespace synapse
