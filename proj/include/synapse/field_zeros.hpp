#pragma once

#include <vector>

#include "synapse/magnetostatics.hpp"

namespace synapse {

struct FieldZeros {
  std::vector<Vec3> zeros;  // lexicographic order
  double threshold = 0.0;   // T
  Box domain;
};

/// Scans |B_DC| on a grid over `domain`, refines every node-level local minimum
/// by Levenberg-Marquardt descent on |B_DC|^2 and keeps the points that drop
/// below the assembly's zero threshold, deduplicated within one cell diagonal.
/// Zero lines come back as points sampled along the line.
FieldZeros find_field_zeros(const WireAssembly& assembly, const Box& domain,
                            const Eigen::Vector3i& resolution, int workers = 0);

}  // namespace synapse
