#include "synapse/field_zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "synapse/error.hpp"
#include "synapse/parallel.hpp"

namespace synapse {
namespace {

std::optional<FieldJet> try_jet(const WireAssembly& assembly, const Vec3& p) {
  if (inside_any_fence(assembly, p)) return std::nullopt;
  return b_dc_jet(assembly, p);
}

std::optional<Vec3> refine_zero(const WireAssembly& assembly, const Box& domain, Vec3 p,
                                double max_travel, double threshold) {
  const Vec3 start = p;
  auto jet = try_jet(assembly, p);
  if (!jet) return std::nullopt;
  double lambda = 1e-3;
  for (int iter = 0; iter < 200 && jet->value.norm() >= 1e-3 * threshold; ++iter) {
    const Mat3& J = jet->jacobian;
    const Mat3 JtJ = J.transpose() * J;
    const double scale = std::max(JtJ.diagonal().maxCoeff(), std::numeric_limits<double>::min());
    const Vec3 rhs = -J.transpose() * jet->value;
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const Mat3 A = JtJ + lambda * scale * Mat3::Identity();
      const Vec3 step = A.ldlt().solve(rhs);
      const Vec3 q = p + step;
      if ((q - start).norm() > max_travel || !domain.contains(q)) {
        lambda *= 10.0;
        continue;
      }
      auto trial = try_jet(assembly, q);
      if (trial && trial->value.norm() < jet->value.norm()) {
        p = q;
        jet = trial;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  if (jet->value.norm() < threshold) return p;
  return std::nullopt;
}

}  // namespace

FieldZeros find_field_zeros(const WireAssembly& assembly, const Box& domain,
                            const Eigen::Vector3i& resolution, int workers) {
  if ((resolution.array() < 8).any()) {
    throw Error(ErrorCode::InvalidArgument, "zero search needs at least 8 nodes per axis");
  }
  if (!((domain.upper - domain.lower).array() > 0.0).all()) {
    throw Error(ErrorCode::InvalidArgument, "zero search domain must have positive extents");
  }
  const int nx = resolution.x(), ny = resolution.y(), nz = resolution.z();
  const Vec3 h = (domain.upper - domain.lower).cwiseQuotient((resolution.cast<double>().array() - 1.0).matrix());
  const double diag = h.norm();
  const double threshold = assembly.tolerances.zero_threshold;
  const auto index = [&](int i, int j, int k) { return (static_cast<std::size_t>(k) * ny + j) * nx + i; };
  const auto node = [&](int i, int j, int k) {
    return Vec3(domain.lower + h.cwiseProduct(Vec3(i, j, k)));
  };

  const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
  std::vector<double> bmag(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> jnorm(n, 0.0);
  parallel_for(static_cast<std::size_t>(nz), workers, [&](std::size_t k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const auto jet = try_jet(assembly, node(i, j, static_cast<int>(k)));
        if (!jet) continue;
        const std::size_t id = index(i, j, static_cast<int>(k));
        bmag[id] = jet->value.norm();
        jnorm[id] = jet->jacobian.norm();
      }
    }
  });

  std::vector<Eigen::Vector3i> candidates;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double v = bmag[index(i, j, k)];
        if (std::isnan(v)) continue;
        // A zero within reach of this node implies |B| <~ |J| * diag.
        if (v > 2.0 * jnorm[index(i, j, k)] * diag + threshold) continue;
        bool is_min = true;
        for (int dk = -1; dk <= 1 && is_min; ++dk) {
          for (int dj = -1; dj <= 1 && is_min; ++dj) {
            for (int di = -1; di <= 1; ++di) {
              const int a = i + di, b = j + dj, c = k + dk;
              if ((di == 0 && dj == 0 && dk == 0) || a < 0 || b < 0 || c < 0 || a >= nx ||
                  b >= ny || c >= nz) {
                continue;
              }
              const double w = bmag[index(a, b, c)];
              if (!std::isnan(w) && w < v) {
                is_min = false;
                break;
              }
            }
          }
        }
        if (is_min) candidates.emplace_back(i, j, k);
      }
    }
  }

  std::vector<std::optional<Vec3>> refined(candidates.size());
  parallel_for(candidates.size(), workers, [&](std::size_t c) {
    const auto& ijk = candidates[c];
    refined[c] = refine_zero(assembly, domain, node(ijk.x(), ijk.y(), ijk.z()), 2.0 * diag, threshold);
  });

  std::vector<Vec3> found;
  for (const auto& r : refined) {
    if (r) found.push_back(*r);
  }
  std::sort(found.begin(), found.end(), [](const Vec3& a, const Vec3& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  });
  FieldZeros result;
  result.threshold = threshold;
  result.domain = domain;
  for (const auto& p : found) {
    const bool duplicate = std::any_of(result.zeros.begin(), result.zeros.end(),
                                       [&](const Vec3& q) { return (p - q).norm() <= diag; });
    if (!duplicate) result.zeros.push_back(p);
  }
  return result;
}

}  // namespace synapse
