#include <doctest.h>

#include <random>
#include <set>

#include "stmesh/numbering.hpp"
#include "support/test_meshes.hpp"

using namespace stmesh;

TEST_CASE("make_consistent sorts element node lists") {
  SpatialMesh mesh;
  mesh.dim = 2;
  mesh.coords = {make_point(0, 0), make_point(1, 0), make_point(0, 1), make_point(1, 1),
                 make_point(2, 0), make_point(2, 1), make_point(0, 2), make_point(1, 2)};
  mesh.elements = {Simplex{5, 2, 7}, Simplex{2, 5, 7}};
  SpatialMesh sorted = make_consistent(mesh);
  CHECK(sorted.elements[0][0] == 2);
  CHECK(sorted.elements[0][1] == 5);
  CHECK(sorted.elements[0][2] == 7);
  // Already-sorted input is untouched.
  CHECK(sorted.elements[1][0] == 2);
  CHECK(sorted.elements[1][1] == 5);
  CHECK(sorted.elements[1][2] == 7);
}

TEST_CASE("make_consistent is idempotent and measure preserving") {
  std::mt19937 rng(3);
  for (int dim = 1; dim <= 3; ++dim) {
    SpatialMesh mesh = testing::random_spatial_mesh(dim, 60, rng);
    SpatialMesh once = make_consistent(mesh);
    SpatialMesh twice = make_consistent(once);
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (int i = 0; i <= dim; ++i) CHECK(once.elements[static_cast<std::size_t>(e)][i] ==
                                           twice.elements[static_cast<std::size_t>(e)][i]);
    CHECK(once.total_measure() == doctest::Approx(mesh.total_measure()).epsilon(1e-14));
  }
}

TEST_CASE("shared subsimplices carry identical ordered tuples after sorting") {
  // Oracle: pairwise set intersections over all element pairs.
  std::mt19937 rng(17);
  SpatialMesh mesh = make_consistent(testing::random_spatial_mesh(3, 100, rng));
  for (int a = 0; a < mesh.num_elements(); ++a) {
    for (int b = a + 1; b < mesh.num_elements(); ++b) {
      const Simplex& ea = mesh.elements[static_cast<std::size_t>(a)];
      const Simplex& eb = mesh.elements[static_cast<std::size_t>(b)];
      std::set<NodeId> sa(ea.nodes.begin(), ea.nodes.begin() + ea.num_nodes());
      std::vector<NodeId> ordered_a, ordered_b;
      for (NodeId n : eb.node_span())
        if (sa.count(n)) ordered_b.push_back(n);
      std::set<NodeId> sb(eb.nodes.begin(), eb.nodes.begin() + eb.num_nodes());
      for (NodeId n : ea.node_span())
        if (sb.count(n)) ordered_a.push_back(n);
      CHECK(ordered_a == ordered_b);
    }
  }
}

TEST_CASE("check_consistent accepts sorted meshes") {
  std::mt19937 rng(23);
  for (int dim = 1; dim <= 3; ++dim) {
    SpatialMesh mesh = make_consistent(testing::random_spatial_mesh(dim, 80, rng));
    ConsistencyReport report = check_consistent(mesh);
    CHECK(report.consistent);
    CHECK(report.violations.empty());
  }
}

TEST_CASE("check_consistent reports a reversed shared edge") {
  SpatialMesh mesh = testing::broken_ordering_square();
  ConsistencyReport report = check_consistent(mesh);
  CHECK_FALSE(report.consistent);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].first == 0);
  CHECK(report.violations[0].second == 1);
}

TEST_CASE("single-element mesh is trivially consistent") {
  SpatialMesh mesh;
  mesh.dim = 2;
  mesh.coords = {make_point(0, 0), make_point(1, 0), make_point(0, 1)};
  mesh.elements = {Simplex{2, 0, 1}};  // ordering irrelevant without neighbors
  CHECK(check_consistent(mesh).consistent);
}

TEST_CASE("duplicate elements are reported as non-admissible, not as ordering") {
  SpatialMesh mesh = testing::two_triangle_square();
  mesh.elements.push_back(mesh.elements[0]);
  ConsistencyReport report = check_consistent(mesh);
  CHECK_FALSE(report.consistent);
  CHECK(report.non_admissible.size() == 1);
}
