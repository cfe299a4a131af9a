#include "synapse/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include <Eigen/Dense>

namespace synapse {
namespace {

constexpr double kDefaultScaledTolerance = 1e-8;

std::optional<ValueGradient> try_eval(const Objective& f, const Vec3& x) {
  try {
    ValueGradient r = f(x);
    if (!std::isfinite(r.value) || !r.gradient.allFinite()) return std::nullopt;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

Vec3 default_bend_direction(const Vec3& path) {
  const Vec3 t = path.normalized();
  int axis = 0;
  t.cwiseAbs().minCoeff(&axis);
  Vec3 d = Vec3::Unit(axis) - t * t(axis);
  return d.normalized();
}

/// Everything in scaled coordinates: y = (x - origin) / L, phi = (U - U0) / E.
struct Band {
  const Objective& objective;
  Vec3 origin;
  double L;
  double U0;
  double E;

  std::optional<ValueGradient> eval(const Vec3& y) const {
    auto r = try_eval(objective, origin + L * y);
    if (!r) return std::nullopt;
    return ValueGradient{(r->value - U0) / E, r->gradient * (L / E)};
  }
  Objective scaled() const {
    return [this](const Vec3& y) {
      auto r = eval(y);
      if (!r) throw Error(ErrorCode::Singularity, "band left the potential's domain");
      return *r;
    };
  }
};

/// Newton iteration on grad = 0 from y; returns the stationary point if the
/// scaled gradient drops below tol without wandering off.
std::optional<Vec3> newton_polish(const Band& band, Vec3 y, double tol) {
  const Objective scaled = band.scaled();
  const Vec3 start = y;
  for (int it = 0; it < 40; ++it) {
    auto r = band.eval(y);
    if (!r) return std::nullopt;
    if (r->gradient.norm() <= tol) return y;
    Mat3 H;
    try {
      H = finite_difference_hessian(scaled, y, 1e-6);
    } catch (const Error&) {
      return std::nullopt;
    }
    Vec3 step = H.fullPivLu().solve(-r->gradient);
    if (!step.allFinite()) return std::nullopt;
    if (step.norm() > 0.05) step *= 0.05 / step.norm();
    y += step;
    if ((y - start).norm() > 0.25) return std::nullopt;
  }
  return std::nullopt;
}

BarrierResult relax_band(const Objective& objective, const Vec3& endA_in, const Vec3& endB_in,
                         const SaddleOptions& options) {
  if (options.images < 3) throw Error(ErrorCode::InvalidArgument, "band needs at least 3 images");
  const double separation0 = (endB_in - endA_in).norm();
  if (!(separation0 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "saddle search endpoints coincide");
  }
  double L = options.length_scale > 0.0 ? options.length_scale : separation0;

  auto evalA = try_eval(objective, endA_in);
  auto evalB = try_eval(objective, endB_in);
  if (!evalA || !evalB) throw Error(ErrorCode::InvalidArgument, "saddle endpoint outside the domain");

  // Energy scale from the straight path between the seeds.
  double E = 0.0;
  for (int i = 0; i <= 16; ++i) {
    const double s = i / 16.0;
    if (auto r = try_eval(objective, endA_in + s * (endB_in - endA_in))) {
      E = std::max(E, std::abs(r->value - evalA->value));
    }
  }
  if (!(E > 0.0)) E = std::max(std::abs(evalA->value), 1e-300);
  const double tol = options.tol_grad > 0.0 ? options.tol_grad * L / E : kDefaultScaledTolerance;

  BarrierResult result;
  Vec3 endA = endA_in, endB = endB_in;
  if (options.descend_endpoints) {
    DescentOptions d;
    d.tol_grad = tol * E / L;
    d.length_scale = L;
    d.energy_scale = E;
    d.max_iterations = 2000;
    d.max_step = 0.05;
    const DescentResult a = descend(objective, endA, d);
    const DescentResult b = descend(objective, endB, d);
    if (!a.converged || !b.converged) {
      result.warnings.push_back("endpoint descent did not reach the gradient tolerance");
    }
    endA = a.position;
    endB = b.position;
    if ((endB - endA).norm() <= 1e-9 * L) {
      throw Error(ErrorCode::InvalidArgument, "both endpoints descend into the same minimum");
    }
    if (options.length_scale <= 0.0) L = (endB - endA).norm();
  }

  const ValueGradient UA = *try_eval(objective, endA);
  const ValueGradient UB = *try_eval(objective, endB);
  Band band{objective, endA, L, UA.value, E};
  const double scaled_tol = options.tol_grad > 0.0 ? options.tol_grad * L / E : kDefaultScaledTolerance;

  const int N = options.images;
  std::vector<Vec3> y(N), vel(N, Vec3::Zero()), grad(N, Vec3::Zero()), force(N, Vec3::Zero());
  std::vector<double> phi(N, 0.0);
  const Vec3 yB = (endB - endA) / L;
  const Vec3 bend = options.bend_direction ? Vec3(*options.bend_direction - yB.normalized() * yB.normalized().dot(*options.bend_direction)).normalized()
                                           : default_bend_direction(yB);
  for (int i = 0; i < N; ++i) {
    const double s = static_cast<double>(i) / (N - 1);
    y[i] = s * yB + (options.initial_bend / L) * std::sin(std::numbers::pi * s) * bend;
  }
  phi[0] = 0.0;
  grad[0] = UA.gradient * (L / E);
  phi[N - 1] = (UB.value - UA.value) / E;
  grad[N - 1] = UB.gradient * (L / E);

  // FIRE parameters (scaled units).
  double dt = 0.02;
  const double dt_max = 0.2;
  double alpha = 0.1;
  int positive_steps = 0;
  bool climbing = false;
  int imax = 1;
  std::optional<Vec3> polished;
  int last_polish = -1000;
  std::vector<Vec3> saved = y;

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    bool ok = true;
    for (int i = 1; i < N - 1 && ok; ++i) {
      auto r = band.eval(y[i]);
      if (!r) {
        ok = false;
        break;
      }
      phi[i] = r->value;
      grad[i] = r->gradient;
    }
    if (!ok) {
      y = saved;
      std::fill(vel.begin(), vel.end(), Vec3::Zero());
      dt *= 0.5;
      alpha = 0.1;
      positive_steps = 0;
      if (dt < 1e-10) break;
      continue;
    }
    saved = y;

    imax = 1;
    for (int i = 2; i < N - 1; ++i) {
      if (phi[i] > phi[imax]) imax = i;
    }

    double max_force = 0.0;
    for (int i = 1; i < N - 1; ++i) {
      const Vec3 tp = y[i + 1] - y[i];
      const Vec3 tm = y[i] - y[i - 1];
      Vec3 tau;
      if (phi[i + 1] > phi[i] && phi[i] > phi[i - 1]) {
        tau = tp;
      } else if (phi[i + 1] < phi[i] && phi[i] < phi[i - 1]) {
        tau = tm;
      } else {
        const double dmax = std::max(std::abs(phi[i + 1] - phi[i]), std::abs(phi[i - 1] - phi[i]));
        const double dmin = std::min(std::abs(phi[i + 1] - phi[i]), std::abs(phi[i - 1] - phi[i]));
        tau = phi[i + 1] > phi[i - 1] ? Vec3(tp * dmax + tm * dmin) : Vec3(tp * dmin + tm * dmax);
      }
      if (tau.norm() == 0.0) tau = tp;
      tau.normalize();
      const double gt = grad[i].dot(tau);
      if (climbing && i == imax) {
        force[i] = -grad[i] + 2.0 * gt * tau;
      } else {
        force[i] = -(grad[i] - gt * tau) + options.spring * (tp.norm() - tm.norm()) * tau;
      }
      max_force = std::max(max_force, force[i].norm());
    }

    if (!climbing && (iter >= 200 || max_force < 0.05)) climbing = true;
    if (climbing) {
      const double gnorm = grad[imax].norm();
      if (gnorm <= scaled_tol) {
        polished = y[imax];
        break;
      }
      if (gnorm <= 1e-2 && iter - last_polish >= 100) {
        last_polish = iter;
        if (auto p = newton_polish(band, y[imax], scaled_tol)) {
          const Objective scaled = band.scaled();
          int index = -1;
          try {
            index = hessian_index(finite_difference_hessian(scaled, *p, 1e-5));
          } catch (const Error&) {
          }
          if (index == 1) {
            polished = p;
            break;
          }
        }
      }
    }

    // FIRE step over the stacked interior images.
    double power = 0.0, vnorm2 = 0.0, fnorm2 = 0.0;
    for (int i = 1; i < N - 1; ++i) {
      power += force[i].dot(vel[i]);
      vnorm2 += vel[i].squaredNorm();
      fnorm2 += force[i].squaredNorm();
    }
    const double ratio = fnorm2 > 0.0 ? std::sqrt(vnorm2 / fnorm2) : 0.0;
    for (int i = 1; i < N - 1; ++i) vel[i] = (1.0 - alpha) * vel[i] + alpha * ratio * force[i];
    if (power > 0.0) {
      if (++positive_steps > 5) {
        dt = std::min(dt * 1.1, dt_max);
        alpha *= 0.99;
      }
    } else {
      positive_steps = 0;
      dt *= 0.5;
      alpha = 0.1;
      for (auto& v : vel) v.setZero();
    }
    for (int i = 1; i < N - 1; ++i) {
      vel[i] += dt * force[i];
      Vec3 step = dt * vel[i];
      if (step.norm() > 0.02) step *= 0.02 / step.norm();
      y[i] += step;
    }
  }

  result.minA = {endA, UA.value};
  result.minB = {endB, UB.value};
  result.iterations = iter;
  for (int i = 0; i < N; ++i) {
    result.path.push_back(endA + L * y[i]);
    result.path_energy.push_back(UA.value + E * phi[i]);
  }

  const Vec3 ys = polished ? *polished : y[imax];
  const auto at_saddle = band.eval(ys);
  result.saddle = {endA + L * ys, UA.value + E * (at_saddle ? at_saddle->value : phi[imax])};
  result.residual = at_saddle ? at_saddle->gradient.norm() * E / L : std::numeric_limits<double>::infinity();
  result.barrierA = result.saddle.U - UA.value;
  result.barrierB = result.saddle.U - UB.value;
  result.converged = polished.has_value();
  if (!result.converged) {
    throw SaddleNotConverged("saddle search did not converge after " + std::to_string(iter) +
                                 " iterations",
                             std::move(result));
  }
  try {
    result.hessian_index = hessian_index(finite_difference_hessian(band.scaled(), ys, 1e-5));
  } catch (const Error&) {
    result.hessian_index = -1;
  }
  if (result.hessian_index != 1) {
    result.warnings.push_back("degenerate saddle: Hessian index " + std::to_string(result.hessian_index));
  }
  return result;
}

}  // namespace

BarrierResult find_saddle(const Objective& objective, const Vec3& endA, const Vec3& endB,
                          const SaddleOptions& options) {
  BarrierResult result = relax_band(objective, endA, endB, options);
  // A straight band through a symmetric point can pin the climbing image on a
  // higher-order stationary point. Restart bent along its extra unstable mode.
  for (int attempt = 0; attempt < 2 && result.hessian_index > 1; ++attempt) {
    const Vec3 chord = (result.minB.position - result.minA.position).normalized();
    const double span = (result.minB.position - result.minA.position).norm();
    Mat3 H;
    try {
      H = finite_difference_hessian(objective, result.saddle.position, 1e-5 * span);
    } catch (const Error&) {
      break;
    }
    const Eigen::SelfAdjointEigenSolver<Mat3> eig(H);
    // Unstable modes may be degenerate, so bend along the part of the most
    // transverse one that is orthogonal to the chord.
    Vec3 bend = Vec3::Zero();
    for (int k = 0; k < 3 && eig.eigenvalues()[k] < 0.0; ++k) {
      const Vec3 v = eig.eigenvectors().col(k);
      const Vec3 t = v - chord * chord.dot(v);
      if (t.norm() > bend.norm()) bend = t;
    }
    if (bend.norm() < 0.5) break;
    SaddleOptions bent = options;
    bent.descend_endpoints = false;
    bent.bend_direction = bend.normalized();
    bent.initial_bend = 0.25 * span * (attempt == 0 ? 1.0 : -1.0);
    try {
      BarrierResult retry = relax_band(objective, result.minA.position, result.minB.position, bent);
      if (retry.hessian_index == 1 || retry.saddle.U < result.saddle.U) {
        for (const auto& w : result.warnings) {
          if (w.rfind("degenerate saddle", 0) != 0) retry.warnings.push_back(w);
        }
        retry.iterations += result.iterations;
        result = std::move(retry);
      }
    } catch (const SaddleNotConverged&) {
      break;
    }
  }
  return result;
}

Objective dressed_objective(const DressedParams& params, const WireAssembly& assembly) {
  return [params, assembly](const Vec3& p) {
    const PotentialSample s = dressed_potential(params, assembly, p);
    if (!s.gradient_defined) {
      throw Error(ErrorCode::NonDifferentiable, "conical point of the dressed potential");
    }
    return ValueGradient{s.U, s.grad};
  };
}

BarrierResult find_saddle(const DressedParams& params, const WireAssembly& assembly,
                          const Vec3& endA, const Vec3& endB, const SaddleOptions& options) {
  return find_saddle(dressed_objective(params, assembly), endA, endB, options);
}

}  // namespace synapse
