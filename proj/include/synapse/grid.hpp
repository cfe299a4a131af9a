#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "synapse/dressed.hpp"
#include "synapse/parallel.hpp"

namespace synapse {

struct GridSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 extents = Vec3::Ones();
  Eigen::Vector3i resolution = Eigen::Vector3i::Constant(2);

  void validate() const;
  Vec3 spacing() const;
  double cell_diagonal() const { return spacing().norm(); }
  std::size_t size() const;
  /// x-fastest linear index.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * resolution.y() + j) * resolution.x() + i;
  }
  Vec3 node(int i, int j, int k) const { return origin + spacing().cwiseProduct(Vec3(i, j, k)); }
  Box box() const { return {origin, origin + extents}; }

  bool operator==(const GridSpec&) const = default;
};

/// Regular-grid samples. Masked nodes (mask == 0) hold NaN.
struct ScalarField3D {
  GridSpec spec;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  bool valid(std::size_t id) const { return mask[id] != 0; }
  /// Min and max over valid nodes; NaNs if none.
  std::pair<double, double> range() const;
};

enum class ScalarSource { FieldMagnitude, Potential, Detuning, Rabi };

std::string_view to_string(ScalarSource source);
std::optional<ScalarSource> parse_scalar_source(std::string_view name);

/// Samples any p -> optional<double> callable; std::nullopt masks the node.
template <typename Sampler>
ScalarField3D sample_function(const GridSpec& spec, Sampler&& sampler, int workers = 0) {
  spec.validate();
  ScalarField3D field;
  field.spec = spec;
  field.values.assign(spec.size(), std::numeric_limits<double>::quiet_NaN());
  field.mask.assign(spec.size(), 0);
  const int nx = spec.resolution.x(), ny = spec.resolution.y();
  parallel_for(static_cast<std::size_t>(spec.resolution.z()), workers, [&](std::size_t kk) {
    const int k = static_cast<int>(kk);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::optional<double> v = sampler(spec.node(i, j, k));
        if (v && std::isfinite(*v)) {
          const std::size_t id = spec.index(i, j, k);
          field.values[id] = *v;
          field.mask[id] = 1;
        }
      }
    }
  });
  return field;
}

/// Node values are pure functions of the node position, so the result is
/// bit-identical for any worker count. Fenced nodes and quantization-axis
/// failures are masked.
ScalarField3D sample_grid(ScalarSource source, const DressedParams& params,
                          const WireAssembly& assembly, const GridSpec& spec, int workers = 0);

}  // namespace synapse
