#include <doctest.h>

#include <random>

#include "stmesh/extrusion.hpp"
#include "stmesh/slicing.hpp"
#include "support/test_meshes.hpp"

using namespace stmesh;

TEST_CASE("edge_plane_intersection: axis-aligned midpoint") {
  Hyperplane plane = Hyperplane::constant_time(0.5, 4);
  auto hit = edge_plane_intersection(make_point(0, 0, 0, 0), make_point(0, 0, 0, 1), plane, 4);
  REQUIRE(hit.has_value());
  CHECK(hit->lambda == doctest::Approx(0.5));
  CHECK(hit->point[3] == doctest::Approx(0.5));
}

TEST_CASE("edge inside the plane is singular") {
  Hyperplane plane = Hyperplane::constant_time(0.0, 4);
  auto hit = edge_plane_intersection(make_point(0, 0, 0, 0), make_point(1, 1, 0, 0), plane, 4);
  CHECK_FALSE(hit.has_value());
}

TEST_CASE("edge_plane_intersection agrees with the closed-form time parameter") {
  std::mt19937 rng(73);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Point x1 = make_point(dist(rng), dist(rng), dist(rng), dist(rng));
    Point x2 = make_point(dist(rng), dist(rng), dist(rng), dist(rng));
    const double t_star = 0.3 * dist(rng);
    Hyperplane plane = Hyperplane::constant_time(t_star, 4);
    auto hit = edge_plane_intersection(x1, x2, plane, 4);
    if (std::abs(x1[3] - x2[3]) < 1e-12) continue;
    const double lambda = (t_star - x1[3]) / (x2[3] - x1[3]);
    if (lambda < 0.0 || lambda > 1.0) {
      CHECK_FALSE(hit.has_value());
    } else {
      REQUIRE(hit.has_value());
      CHECK(hit->lambda == doctest::Approx(lambda).epsilon(1e-12));
      Point expected = x1 + lambda * (x2 - x1);
      CHECK((hit->point - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("general plane: solver matches parametric substitution") {
  std::mt19937 rng(79);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Hyperplane plane;
  plane.p0 = make_point(0.1, -0.2, 0.3, 0.4);
  plane.span = {make_point(1, 1, 0, 0), make_point(0, 1, 1, 0), make_point(0, 0, 1, 1)};
  const Point n = plane.unit_normal(4);
  for (int trial = 0; trial < 50; ++trial) {
    Point x1 = make_point(dist(rng), dist(rng), dist(rng), dist(rng));
    Point x2 = make_point(dist(rng), dist(rng), dist(rng), dist(rng));
    auto hit = edge_plane_intersection(x1, x2, plane, 4);
    if (!hit) continue;
    // The intersection point satisfies the plane equation and the edge
    // parametrisation.
    CHECK(std::abs(n.dot(hit->point - plane.p0)) < 1e-12);
    Point expected = x1 + hit->lambda * (x2 - x1);
    CHECK((hit->point - expected).norm() < 1e-12);
  }
}

TEST_CASE("hyperplane with dependent span vectors is rejected") {
  Hyperplane plane;
  plane.p0 = Point::Zero();
  plane.span = {make_point(1, 0, 0, 0), make_point(2, 0, 0, 0), make_point(0, 0, 1, 0)};
  CHECK_THROWS_AS(plane.unit_normal(4), Error);
}

TEST_CASE("slicing the reference pentatope mid-slab yields a tetrahedron") {
  // Pentatope [e0', e1', e2', e3', e0'']: brute force over all 10 edges gives
  // 4 crossings (the edges from e0'' down to the base).
  SpaceTimeMesh st;
  st.dim = 4;
  st.coords = {make_point(0, 0, 0, 0), make_point(1, 0, 0, 0), make_point(0, 1, 0, 0),
               make_point(0, 0, 1, 0), make_point(0, 0, 0, 1)};
  st.elements = {Simplex{0, 1, 2, 3, 4}};
  st.t_begin = 0.0;
  st.t_end = 1.0;
  compute_mesh_sizes(st);

  auto cells = slice_element(st, 0, Hyperplane::constant_time(0.5, 4));
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].type == CellType::Tetra);

  // Count crossings by brute force with the general solver.
  Hyperplane plane = Hyperplane::constant_time(0.5, 4);
  int crossings = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (edge_plane_intersection(st.coords[static_cast<std::size_t>(i)],
                                  st.coords[static_cast<std::size_t>(j)], plane, 4))
        ++crossings;
  CHECK(crossings == 4);
}

TEST_CASE("mid-slab sections of an extruded tetrahedron: wedges from the middle simplices") {
  SpatialMesh tet;
  tet.dim = 3;
  tet.coords = {make_point(0, 0, 0), make_point(1, 0, 0), make_point(0, 1, 0),
                make_point(0, 0, 1)};
  tet.elements = {Simplex{0, 1, 2, 3}};
  tag_boundary(tet, [](std::span<const Point>) { return SpatialTag::Dirichlet; });
  SpaceTimeMesh st = extrude_multi(tet, {0.0, 1.0});
  REQUIRE(st.num_elements() == 4);

  int wedges = 0, tets = 0;
  for (int e = 0; e < st.num_elements(); ++e) {
    auto cells = slice_element(st, e, Hyperplane::constant_time(0.4, 4));
    for (const auto& c : cells) {
      if (c.type == CellType::Wedge) ++wedges;
      if (c.type == CellType::Tetra) ++tets;
    }
  }
  // S^1 and S^4 give tetrahedra, S^2 and S^3 wedges.
  CHECK(wedges == 2);
  CHECK(tets == 2);
}

TEST_CASE("mid-slab sections of an extruded triangle: quad from the middle simplex") {
  SpatialMesh tri;
  tri.dim = 2;
  tri.coords = {make_point(0, 0), make_point(1, 0), make_point(0, 1)};
  tri.elements = {Simplex{0, 1, 2}};
  tag_boundary(tri, [](std::span<const Point>) { return SpatialTag::Dirichlet; });
  SpaceTimeMesh st = extrude_multi(tri, {0.0, 1.0});
  REQUIRE(st.num_elements() == 3);
  int quads = 0, tris = 0;
  for (int e = 0; e < st.num_elements(); ++e) {
    for (const auto& c : slice_element(st, e, Hyperplane::constant_time(0.4, 3))) {
      if (c.type == CellType::Quad) ++quads;
      if (c.type == CellType::Triangle) ++tris;
    }
  }
  CHECK(quads == 1);
  CHECK(tris == 2);
}

TEST_CASE("slice below the element time range is empty") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  // Elements of the upper slab do not intersect t = 0.2.
  bool upper_checked = false;
  for (int e = 0; e < st.num_elements(); ++e) {
    auto pts = st.element_points(e);
    double tmin = 1e300;
    for (const Point& p : pts) tmin = std::min(tmin, p[2]);
    if (tmin >= 0.5) {
      CHECK(slice_element(st, e, Hyperplane::constant_time(0.2, 3)).empty());
      upper_checked = true;
    }
  }
  CHECK(upper_checked);
}

TEST_CASE("sliced area equals the domain area for zero motion") {
  std::mt19937 rng(83);
  SpatialMesh mesh = testing::random_spatial_mesh(2, 60, rng);
  const double area = mesh.total_measure();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.3, 0.7, 1.0});
  for (double t : {0.1, 0.3, 0.45, 0.9}) {
    SliceComplex complex = slice_mesh(st, t);
    CHECK(complex.total_measure() == doctest::Approx(area).epsilon(1e-10));
  }
}

TEST_CASE("slice exactly at a slab interface is emitted once") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  SliceComplex complex = slice_mesh(st, 0.5);
  CHECK(complex.total_measure() == doctest::Approx(1.0).epsilon(1e-12));
  // The interface triangulation is the spatial mesh itself.
  CHECK(complex.cells.size() == 2);
  for (const SliceCell& c : complex.cells) CHECK(c.type == CellType::Triangle);
}

TEST_CASE("slices at the ends of the time cylinder") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  CHECK(slice_mesh(st, 0.0).total_measure() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(slice_mesh(st, 1.0).total_measure() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(slice_mesh(st, 1.5), Error);
}

TEST_CASE("affine field interpolation is exact") {
  std::mt19937 rng(89);
  SpatialMesh mesh = testing::random_spatial_mesh(2, 40, rng);
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});

  NodalField affine;
  affine.name = "affine";
  affine.components = 1;
  for (int i = 0; i < st.num_nodes(); ++i) {
    const Point& p = st.coords[static_cast<std::size_t>(i)];
    affine.values.push_back(2.0 * p[0] - 3.0 * p[1] + 0.5 * p[2] + 0.25);
  }
  const double t_star = 0.37;
  SliceComplex complex = slice_mesh(st, t_star, {affine});
  REQUIRE(complex.point_fields.size() == 1);
  for (std::size_t i = 0; i < complex.points.size(); ++i) {
    const Point& p = complex.points[i];
    CHECK(std::abs(p[2] - t_star) < 1e-10);
    const double expected = 2.0 * p[0] - 3.0 * p[1] + 0.5 * p[2] + 0.25;
    CHECK(complex.point_fields[0].values[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("linear-in-time field slices to the slice time") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.25, 0.5, 0.75, 1.0});
  NodalField time_field;
  time_field.name = "u";
  time_field.components = 1;
  for (int i = 0; i < st.num_nodes(); ++i)
    time_field.values.push_back(st.coords[static_cast<std::size_t>(i)][2]);
  SliceComplex complex = slice_mesh(st, 0.6, {time_field});
  for (double v : complex.point_fields[0].values)
    CHECK(v == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("slice measure is continuous in the slice time") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  const double eps = 1e-6;
  for (double t : {0.2, 0.5, 0.8}) {
    const double a0 = slice_mesh(st, t - eps).total_measure();
    const double a1 = slice_mesh(st, t + eps).total_measure();
    CHECK(std::abs(a1 - a0) < 10.0 * eps + 1e-12);
  }
}

TEST_CASE("pentatope slices over a 4d extrusion are tetrahedra and wedges only") {
  SpatialMesh mesh = unit_cube_mesh(2);
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> tdist(0.01, 0.99);
  for (int trial = 0; trial < 5; ++trial) {
    SliceComplex complex = slice_mesh(st, tdist(rng));
    CHECK(complex.total_measure() == doctest::Approx(1.0).epsilon(1e-10));
    for (const SliceCell& c : complex.cells)
      CHECK((c.type == CellType::Tetra || c.type == CellType::Wedge));
  }
}
