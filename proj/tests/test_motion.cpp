#include <doctest.h>

#include <random>

#include "stmesh/motion.hpp"
#include "support/test_meshes.hpp"

using namespace stmesh;

TEST_CASE("pump membrane at rest on the axis") {
  MotionSpec spec;
  spec.kind = MotionKind::BuiltinPump;
  const Point g = eval_motion(spec, make_point(0, 0, 0.4), 0.0);
  CHECK(g.norm() == doctest::Approx(0.0));
}

TEST_CASE("pump membrane apex at half period") {
  MotionSpec spec;
  spec.kind = MotionKind::BuiltinPump;
  // sin^2(pi/2) = 1: target height 1.4, displacement (0,0,1).
  const Point g = eval_motion(spec, make_point(0, 0, 0.4), 0.5);
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(0.0));
  CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("literal pump formula also moves x and y off the axis") {
  MotionSpec spec;
  spec.kind = MotionKind::BuiltinPump;
  const Point x = make_point(0.3, 0.2, 0.4);
  const Point literal = eval_motion(spec, x, 0.25);
  CHECK(literal[0] == doctest::Approx(-0.3));
  CHECK(literal[1] == doctest::Approx(-0.2));

  spec.pump_z_only = true;
  const Point zonly = eval_motion(spec, x, 0.25);
  CHECK(zonly[0] == doctest::Approx(0.0));
  CHECK(zonly[1] == doctest::Approx(0.0));
  CHECK(zonly[2] == doctest::Approx(literal[2]).epsilon(1e-14));
}

TEST_CASE("ypipe strips vanish on the z = -3 plane and at t = 0") {
  MotionSpec spec;
  spec.kind = MotionKind::BuiltinYPipe;
  CHECK(eval_motion(spec, make_point(1, 0, -3), 0.37).norm() == doctest::Approx(0.0));
  CHECK(eval_motion(spec, make_point(1, 0, -8), 0.0).norm() == doctest::Approx(0.0));
  // 4 |z+3| / 7 sin^2(pi t) e_z.
  const Point g = eval_motion(spec, make_point(0, 0, -10), 0.5);
  CHECK(g[2] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("builtin motions are 1-periodic") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> tdist(0.0, 1.0);
  for (MotionKind kind : {MotionKind::BuiltinPump, MotionKind::BuiltinYPipe}) {
    MotionSpec spec;
    spec.kind = kind;
    spec.time_horizon = 2.0;
    spec.pump_z_only = true;
    for (int trial = 0; trial < 20; ++trial) {
      const double t = tdist(rng);
      const Point x = kind == MotionKind::BuiltinPump ? make_point(0.1, 0.2, 0.4)
                                                      : make_point(0.5, 0.5, -6.0);
      const Point a = eval_motion(spec, x, t);
      const Point b = eval_motion(spec, x, t + 1.0);
      CHECK((a - b).norm() < 1e-14 * std::max(1.0, a.norm()));
    }
  }
}

TEST_CASE("time outside the horizon is rejected") {
  MotionSpec spec;
  spec.kind = MotionKind::BuiltinPump;
  CHECK_THROWS_AS(eval_motion(spec, make_point(0, 0, 0.4), 1.5), Error);
  CHECK_THROWS_AS(eval_motion(spec, make_point(0, 0, 0.4), -0.5), Error);
}

TEST_CASE("zero boundary data smooths to the zero field") {
  SpatialMesh mesh = unit_square_mesh(4);
  auto boundary = boundary_node_mask(mesh);
  DisplacementField data(static_cast<std::size_t>(mesh.num_nodes()), Point::Zero());
  DisplacementField field = smooth_displacement(mesh, boundary, data);
  for (const Point& p : field) CHECK(p.norm() == doctest::Approx(0.0));
}

TEST_CASE("constant boundary data reproduces the constant") {
  SpatialMesh mesh = unit_square_mesh(5);
  auto boundary = boundary_node_mask(mesh);
  const Point c = make_point(0.3, -0.7);
  DisplacementField data(static_cast<std::size_t>(mesh.num_nodes()), c);
  DisplacementField field = smooth_displacement(mesh, boundary, data);
  for (const Point& p : field) CHECK((p - c).head(2).norm() < 1e-10);
}

TEST_CASE("linear boundary data is reproduced exactly") {
  // P1 Laplacian reproduces globally affine fields; oracle is the direct
  // evaluation of A x + b at the nodes.
  std::mt19937 rng(67);
  SpatialMesh mesh = testing::random_spatial_mesh(2, 60, rng);
  auto boundary = boundary_node_mask(mesh);
  Eigen::Matrix2d a;
  a << 0.5, -1.25, 2.0, 0.75;
  Eigen::Vector2d b(0.1, -0.4);
  DisplacementField data(static_cast<std::size_t>(mesh.num_nodes()), Point::Zero());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    Eigen::Vector2d v = a * mesh.coords[static_cast<std::size_t>(i)].head<2>() + b;
    data[static_cast<std::size_t>(i)].head<2>() = v;
  }
  DisplacementField field = smooth_displacement(mesh, boundary, data);
  for (int i = 0; i < mesh.num_nodes(); ++i)
    CHECK((field[static_cast<std::size_t>(i)] - data[static_cast<std::size_t>(i)]).head(2).norm() <
          1e-10);
}

TEST_CASE("smoothed field matches boundary data exactly on boundary nodes") {
  std::mt19937 rng(71);
  // No jitter: the max-principle part needs non-obtuse elements.
  SpatialMesh mesh = testing::random_spatial_mesh(2, 40, rng, 0.0);
  auto boundary = boundary_node_mask(mesh);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DisplacementField data(static_cast<std::size_t>(mesh.num_nodes()), Point::Zero());
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (boundary[static_cast<std::size_t>(i)]) data[static_cast<std::size_t>(i)] = make_point(dist(rng), dist(rng));
  DisplacementField field = smooth_displacement(mesh, boundary, data);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (boundary[static_cast<std::size_t>(i)]) {
      CHECK((field[static_cast<std::size_t>(i)] - data[static_cast<std::size_t>(i)]).norm() == 0.0);
      lo = std::min(lo, data[static_cast<std::size_t>(i)][0]);
      hi = std::max(hi, data[static_cast<std::size_t>(i)][0]);
    }
  }
  // Discrete max principle for the first component (structured meshes here
  // are non-obtuse up to the mild jitter).
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    CHECK(field[static_cast<std::size_t>(i)][0] >= lo - 1e-9);
    CHECK(field[static_cast<std::size_t>(i)][0] <= hi + 1e-9);
  }
}

TEST_CASE("smoothing requires a boundary") {
  SpatialMesh mesh = unit_square_mesh(2);
  std::vector<bool> empty(static_cast<std::size_t>(mesh.num_nodes()), false);
  DisplacementField data(static_cast<std::size_t>(mesh.num_nodes()), Point::Zero());
  CHECK_THROWS_AS(smooth_displacement(mesh, empty, data), Error);
}
