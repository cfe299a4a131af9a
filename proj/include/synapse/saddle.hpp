#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synapse/dressed.hpp"
#include "synapse/error.hpp"
#include "synapse/optimize.hpp"

namespace synapse {

struct StationaryPoint {
  Vec3 position = Vec3::Zero();
  double U = 0.0;
};

struct BarrierResult {
  StationaryPoint minA;
  StationaryPoint minB;
  StationaryPoint saddle;
  double barrierA = 0.0;  // U_saddle - U_minA
  double barrierB = 0.0;  // U_saddle - U_minB
  std::vector<Vec3> path;
  std::vector<double> path_energy;
  bool converged = false;
  double residual = 0.0;  // |grad U| at the saddle
  int hessian_index = -1;
  int iterations = 0;
  /// Set by barrier_height when both seeds descend into the same minimum.
  bool merged = false;
  bool touching = false;
  double touch_tolerance = 0.0;
  std::vector<std::string> warnings;

  double barrier() const { return std::min(barrierA, barrierB); }
};

struct SaddleOptions {
  int images = 15;             // including both endpoints
  int max_iterations = 6000;
  double tol_grad = 0.0;       // objective units per metre; 0 selects 1e-8 in scaled units
  double spring = 1.0;         // scaled units
  double initial_bend = 0.0;   // m, peak sideways offset of the initial path
  std::optional<Vec3> bend_direction;
  double length_scale = 0.0;   // m; 0 selects |endB - endA|
  bool descend_endpoints = true;
};

/// Thrown when the band does not converge; carries the best path found.
class SaddleNotConverged : public Error {
 public:
  SaddleNotConverged(const std::string& what, BarrierResult best)
      : Error(ErrorCode::NotConverged, what), best_(std::move(best)) {}
  const BarrierResult& best() const noexcept { return best_; }

 private:
  BarrierResult best_;
};

/// Climbing-image nudged elastic band between two minima of `objective`,
/// followed by a Newton polish of the climbing image using a finite-difference
/// Hessian. Endpoints are first relaxed by local descent (unless disabled).
/// A converged saddle whose Hessian index is not 1 gets a warning.
BarrierResult find_saddle(const Objective& objective, const Vec3& endA, const Vec3& endB,
                          const SaddleOptions& options);

/// Dressed potential as an Objective (J, J/m).
Objective dressed_objective(const DressedParams& params, const WireAssembly& assembly);

BarrierResult find_saddle(const DressedParams& params, const WireAssembly& assembly,
                          const Vec3& endA, const Vec3& endB, const SaddleOptions& options);

}  // namespace synapse
