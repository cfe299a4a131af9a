#include <doctest.h>

#include "support.hpp"
#include "synapse/error.hpp"
#include "synapse/isosurface.hpp"

using namespace synapse;

namespace {

void check_mesh_sane(const IsoSurfaceMesh& m, const GridSpec& g) {
  const Vec3 slack = 1e-12 * g.extents;
  const Box box{g.origin - slack, g.origin + g.extents + slack};
  for (const Vec3& v : m.vertices) CHECK(box.contains(v));
  for (const auto& t : m.triangles) {
    for (int i : t) CHECK((i >= 0 && i < static_cast<int>(m.vertices.size())));
  }
}

}  // namespace

TEST_SUITE("isosurface") {
  TEST_CASE("single wire |B| = B_res gives the resonance cylinder") {
    const DressedParams p = test::params();
    const WireAssembly a = single_wire(0.0925, 0.0);
    GridSpec g{Vec3(-1e-4, -3e-4, -3e-4), Vec3(2e-4, 6e-4, 6e-4), Eigen::Vector3i(6, 49, 49)};
    const ScalarField3D f = sample_grid(ScalarSource::FieldMagnitude, p, a, g);
    const IsoSurfaceMesh m = extract_isosurface(f, p.resonance_field());
    REQUIRE(m.triangles.size() > 100);
    check_mesh_sane(m, g);
    const double rres = PhysicalConstants::mu0 * 0.0925 / (2.0 * std::numbers::pi * p.resonance_field());
    double worst = 0.0;
    for (const Vec3& v : m.vertices) worst = std::max(worst, std::abs(std::hypot(v.y(), v.z()) - rres));
    CHECK(worst <= g.cell_diagonal());
  }

  TEST_CASE("synthetic sphere and plane") {
    GridSpec g{Vec3::Constant(-1.0), Vec3::Constant(2.0), Eigen::Vector3i(33, 33, 33)};
    const Vec3 c(0.1, -0.05, 0.2);
    const ScalarField3D sphere = sample_function(g, [&](const Vec3& p) { return std::optional<double>((p - c).norm()); });
    const IsoSurfaceMesh m = extract_isosurface(sphere, 0.6);
    check_mesh_sane(m, g);
    for (const Vec3& v : m.vertices) CHECK(std::abs((v - c).norm() - 0.6) <= g.cell_diagonal());

    const Vec3 n = Vec3(1, 2, -0.5).normalized();
    const ScalarField3D plane = sample_function(g, [&](const Vec3& p) { return std::optional<double>(n.dot(p)); });
    const IsoSurfaceMesh pm = extract_isosurface(plane, 0.3);
    for (const Vec3& v : pm.vertices) CHECK(std::abs(n.dot(v) - 0.3) <= 1e-12);
  }

  TEST_CASE("level outside the value range is an empty-mesh error") {
    GridSpec g{Vec3::Zero(), Vec3::Ones(), Eigen::Vector3i(4, 4, 4)};
    const ScalarField3D f = sample_function(g, [](const Vec3&) { return std::optional<double>(2.0); });
    try {
      extract_isosurface(f, 1.0);
      FAIL("expected empty mesh");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyMesh);
    }
  }

  TEST_CASE("cells with a masked corner are skipped") {
    GridSpec g{Vec3::Constant(-1.0), Vec3::Constant(2.0), Eigen::Vector3i(21, 21, 21)};
    const auto sampler = [](const Vec3& p) -> std::optional<double> {
      if (p.x() > 0.0) return std::nullopt;
      return p.norm();
    };
    const IsoSurfaceMesh m = extract_isosurface(sample_function(g, sampler), 0.5);
    REQUIRE_FALSE(m.triangles.empty());
    for (const Vec3& v : m.vertices) CHECK(v.x() <= 1e-12);
  }

  TEST_CASE("output is reproducible") {
    GridSpec g{Vec3::Constant(-1.0), Vec3::Constant(2.0), Eigen::Vector3i(17, 17, 17)};
    const auto f = sample_function(g, [](const Vec3& p) { return std::optional<double>(p.squaredNorm() + 0.3 * p.x()); }, 1);
    const auto h = sample_function(g, [](const Vec3& p) { return std::optional<double>(p.squaredNorm() + 0.3 * p.x()); }, 3);
    const IsoSurfaceMesh a = extract_isosurface(f, 0.4), b = extract_isosurface(h, 0.4);
    CHECK(a.vertices == b.vertices);
    CHECK(a.triangles == b.triangles);
  }
}
