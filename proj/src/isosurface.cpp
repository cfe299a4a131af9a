#include "synapse/isosurface.hpp"

#include <cmath>
#include <unordered_map>

#include "synapse/detail/mc_tables.hpp"
#include "synapse/error.hpp"

namespace synapse {
namespace {

constexpr std::array<std::array<int, 3>, 8> kCorner = {{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};
constexpr std::array<std::array<int, 2>, 12> kEdge = {{
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
}};

}  // namespace

IsoSurfaceMesh extract_isosurface(const ScalarField3D& field, double level) {
  const GridSpec& spec = field.spec;
  const auto [lo, hi] = field.range();
  if (!(level > lo && level < hi)) {
    throw Error(ErrorCode::EmptyMesh, "iso-level lies outside the range of sampled values");
  }

  IsoSurfaceMesh mesh;
  mesh.level = level;
  // Key: (lower node index) * 3 + axis of the grid edge.
  std::unordered_map<std::size_t, int> edge_vertex;
  const int nx = spec.resolution.x(), ny = spec.resolution.y(), nz = spec.resolution.z();

  std::array<std::size_t, 8> ids{};
  std::array<double, 8> v{};
  for (int k = 0; k + 1 < nz; ++k) {
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        bool masked = false;
        int cube = 0;
        for (int c = 0; c < 8; ++c) {
          ids[c] = spec.index(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]);
          if (!field.valid(ids[c])) {
            masked = true;
            break;
          }
          v[c] = field.values[ids[c]];
          if (v[c] < level) cube |= 1 << c;
        }
        if (masked || detail::kEdgeTable[cube] == 0) continue;

        std::array<int, 12> vert{};
        for (int e = 0; e < 12; ++e) {
          if (!(detail::kEdgeTable[cube] & (1 << e))) continue;
          int a = kEdge[e][0], b = kEdge[e][1];
          if (ids[a] > ids[b]) std::swap(a, b);
          int axis = 0;
          while (kCorner[a][axis] == kCorner[b][axis]) ++axis;
          const std::size_t key = ids[a] * 3 + static_cast<std::size_t>(axis);
          auto [it, inserted] = edge_vertex.try_emplace(key, static_cast<int>(mesh.vertices.size()));
          if (inserted) {
            const double t = (level - v[a]) / (v[b] - v[a]);
            const Vec3 pa = spec.node(i + kCorner[a][0], j + kCorner[a][1], k + kCorner[a][2]);
            const Vec3 pb = spec.node(i + kCorner[b][0], j + kCorner[b][1], k + kCorner[b][2]);
            mesh.vertices.push_back(pa + t * (pb - pa));
          }
          vert[e] = it->second;
        }
        const auto& tri = detail::kTriTable[cube];
        for (int t = 0; tri[t] != -1; t += 3) {
          mesh.triangles.push_back({vert[tri[t]], vert[tri[t + 1]], vert[tri[t + 2]]});
        }
      }
    }
  }
  if (mesh.triangles.empty()) {
    throw Error(ErrorCode::EmptyMesh, "no unmasked cell crosses the iso-level");
  }
  return mesh;
}

}  // namespace synapse
