#pragma once

#include <functional>

#include "synapse/types.hpp"

namespace synapse {

struct ValueGradient {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
};

/// Scalar field with gradient. May throw synapse::Error for points outside its
/// domain; optimizers treat that as an infinite value and back off.
using Objective = std::function<ValueGradient(const Vec3&)>;

struct LineMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Brent's method on [a, b]: golden-section steps keep a bracket, parabolic
/// steps refine it. Stops when the bracket is below tol + 4 eps |x|.
LineMinimum brent_minimize(const std::function<double(double)>& f, double a, double b,
                           double tol, int max_iterations = 200);

struct DescentOptions {
  double tol_grad = 0.0;      // in the objective's units per metre
  int max_iterations = 500;
  double length_scale = 1.0;  // m; the optimizer works in x / length_scale
  double energy_scale = 1.0;  // objective units
  double max_step = 0.1;      // in length_scale units
};

struct DescentResult {
  Vec3 position = Vec3::Zero();
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// BFGS with Armijo backtracking on the scaled objective.
DescentResult descend(const Objective& objective, const Vec3& start, const DescentOptions& options);

/// Central-difference Hessian from gradients, symmetrized.
Mat3 finite_difference_hessian(const Objective& objective, const Vec3& x, double step);

/// Number of eigenvalues below -relative_threshold * max|eigenvalue|.
int hessian_index(const Mat3& hessian, double relative_threshold = 1e-8);

}  // namespace synapse
