#include "synapse/optimize.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>

#include "synapse/error.hpp"

namespace synapse {

LineMinimum brent_minimize(const std::function<double(double)>& f, double a, double b,
                           double tol, int max_iterations) {
  constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (a > b) std::swap(a, b);
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int evaluations = 1;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol + 2.0 * eps * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m ? b : a) - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    ++evaluations;
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx, evaluations};
}

namespace {

std::optional<ValueGradient> try_eval(const Objective& f, const Vec3& x) {
  try {
    ValueGradient r = f(x);
    if (!std::isfinite(r.value) || !r.gradient.allFinite()) return std::nullopt;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

DescentResult descend(const Objective& objective, const Vec3& start, const DescentOptions& options) {
  const double L = options.length_scale;
  const double E = options.energy_scale;
  // Scaled problem: y = x / L, phi(y) = f(L y) / E, grad phi = grad f * L / E.
  const double tol = options.tol_grad * L / E;
  auto scaled = [&](const Vec3& y) -> std::optional<ValueGradient> {
    auto r = try_eval(objective, L * y);
    if (!r) return std::nullopt;
    return ValueGradient{r->value / E, r->gradient * (L / E)};
  };

  Vec3 y = start / L;
  auto cur = scaled(y);
  if (!cur) throw Error(ErrorCode::InvalidArgument, "descent start point is outside the domain");
  Mat3 Hinv = Mat3::Identity();
  DescentResult result;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (cur->gradient.norm() <= tol) break;
    Vec3 dir = -Hinv * cur->gradient;
    if (dir.dot(cur->gradient) >= 0.0) {
      Hinv.setIdentity();
      dir = -cur->gradient;
    }
    if (dir.norm() > options.max_step) dir *= options.max_step / dir.norm();
    double t = 1.0;
    std::optional<ValueGradient> next;
    Vec3 y_next;
    const double slope = dir.dot(cur->gradient);
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      y_next = y + t * dir;
      next = scaled(y_next);
      if (next && next->value <= cur->value + 1e-4 * t * slope) break;
      next.reset();
    }
    if (!next) break;
    const Vec3 s = y_next - y;
    const Vec3 g = next->gradient - cur->gradient;
    const double sg = s.dot(g);
    if (sg > 1e-300) {
      const double rho = 1.0 / sg;
      const Mat3 I = Mat3::Identity();
      Hinv = (I - rho * s * g.transpose()) * Hinv * (I - rho * g * s.transpose()) + rho * s * s.transpose();
    }
    y = y_next;
    cur = next;
  }
  result.position = L * y;
  result.value = cur->value * E;
  result.grad_norm = cur->gradient.norm() * E / L;
  result.iterations = iter;
  result.converged = cur->gradient.norm() <= tol;
  return result;
}

Mat3 finite_difference_hessian(const Objective& objective, const Vec3& x, double step) {
  Mat3 H;
  for (int j = 0; j < 3; ++j) {
    Vec3 dx = Vec3::Zero();
    dx[j] = step;
    const Vec3 gp = objective(x + dx).gradient;
    const Vec3 gm = objective(x - dx).gradient;
    H.col(j) = (gp - gm) / (2.0 * step);
  }
  return 0.5 * (H + H.transpose());
}

int hessian_index(const Mat3& hessian, double relative_threshold) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(hessian, Eigen::EigenvaluesOnly);
  const Vec3 ev = solver.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int negative = 0;
  for (int i = 0; i < 3; ++i) {
    if (ev[i] < -relative_threshold * scale) ++negative;
  }
  return negative;
}

}  // namespace synapse
