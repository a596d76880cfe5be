#include <doctest.h>

#include <random>

#include "stmesh/admissibility.hpp"
#include "stmesh/extrusion.hpp"
#include "support/test_meshes.hpp"

using namespace stmesh;

TEST_CASE("two triangles sharing a full edge are admissible") {
  SpatialMesh mesh = testing::two_triangle_square();
  AdmissibilityReport report = check_admissible(mesh);
  CHECK(report.admissible());
}

TEST_CASE("hanging node is reported") {
  SpatialMesh mesh = testing::hanging_node_mesh();
  AdmissibilityReport report = check_admissible(mesh);
  CHECK_FALSE(report.conforming());
  REQUIRE_FALSE(report.violations.empty());
  CHECK(report.violations[0].elem_a == 0);
  CHECK(report.violations[0].elem_b == 1);
}

TEST_CASE("partial overlap of elements sharing no nodes is reported") {
  SpatialMesh mesh;
  mesh.dim = 2;
  // Two overlapping triangles with disjoint node sets.
  mesh.coords = {make_point(0, 0),   make_point(2, 0),   make_point(0, 2),
                 make_point(0.5, 0.5), make_point(2.5, 0.5), make_point(0.5, 2.5)};
  mesh.elements = {Simplex{0, 1, 2}, Simplex{3, 4, 5}};
  AdmissibilityReport report = check_admissible(mesh);
  CHECK_FALSE(report.conforming());
}

TEST_CASE("degenerate element is reported separately") {
  SpatialMesh mesh = testing::two_triangle_square();
  mesh.coords.push_back(make_point(0.5, 0.0));
  mesh.elements.push_back(Simplex{0, 1, 4});  // three collinear points
  AdmissibilityReport report = check_admissible(mesh);
  CHECK(report.degenerate_elements == std::vector<int>{2});
}

TEST_CASE("duplicate element is a violation") {
  SpatialMesh mesh = testing::two_triangle_square();
  mesh.elements.push_back(mesh.elements[1]);
  AdmissibilityReport report = check_admissible(mesh);
  CHECK_FALSE(report.conforming());
}

TEST_CASE("structured random meshes are admissible in every dimension") {
  std::mt19937 rng(31);
  for (int dim = 1; dim <= 3; ++dim) {
    SpatialMesh mesh = testing::random_spatial_mesh(dim, 120, rng);
    AdmissibilityReport report = check_admissible(mesh);
    CHECK(report.admissible());
  }
}

TEST_CASE("vertex-touching elements are admissible") {
  SpatialMesh mesh;
  mesh.dim = 2;
  // Shared vertex only; the definition's vertex case is treated as conforming.
  mesh.coords = {make_point(0, 0), make_point(1, 0), make_point(0, 1),
                 make_point(-1, 0), make_point(0, -1)};
  mesh.elements = {Simplex{0, 1, 2}, Simplex{0, 3, 4}};
  CHECK(check_admissible(mesh).admissible());
}

TEST_CASE("extruded consistently numbered meshes stay admissible") {
  std::mt19937 rng(37);
  for (int dim = 1; dim <= 3; ++dim) {
    SpatialMesh mesh = testing::random_spatial_mesh(dim, 40, rng);
    SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
    AdmissibilityReport report = check_admissible(st);
    CHECK(report.admissible());
  }
}

TEST_CASE("crossing wall diagonals from a broken extrusion are detected") {
  SpatialMesh mesh = testing::broken_ordering_square();
  ExtrudeOptions options;
  options.check_consistency = false;  // force the broken decomposition
  SpaceTimeMesh st = extrude_slab(mesh, SlabSpec{0.0, 1.0, {}, {}}, options);
  AdmissibilityReport report = check_admissible(st);
  CHECK_FALSE(report.conforming());
}
