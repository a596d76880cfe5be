#include <doctest.h>

#include <random>
#include <sstream>

#include "stmesh/extrusion.hpp"
#include "stmesh/matrix_market.hpp"
#include "stmesh/mesh_io.hpp"
#include "stmesh/run_config.hpp"
#include "stmesh/vtk.hpp"
#include "support/test_meshes.hpp"

using namespace stmesh;

TEST_CASE("native format: two-triangle unit square") {
  std::istringstream in(R"(stmesh 1
dim 2
nodes 4
0 0 0
1 1 0
2 0 1
3 1 1
elements 2
0 0 1 2
1 1 3 2
boundary 4
0 1 dirichlet
1 3 robin_in
2 3 dirichlet
0 2 dirichlet
)");
  SpatialMesh mesh = read_spatial_mesh(in);
  CHECK(mesh.num_nodes() == 4);
  CHECK(mesh.num_elements() == 2);
  CHECK(mesh.boundary_tags.size() == 4);
}

TEST_CASE("element index out of range is a parse error with a line number") {
  std::istringstream in(R"(stmesh 1
dim 2
nodes 3
0 0 0
1 1 0
2 0 1
elements 1
0 0 1 7
boundary 0
)");
  try {
    read_spatial_mesh(in);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(std::string(err.what()).find("line 8") != std::string::npos);
  }
}

TEST_CASE("duplicate nodes are rejected") {
  std::istringstream in(R"(stmesh 1
dim 1
nodes 3
0 0
1 1
2 1
elements 2
0 0 1
1 1 2
boundary 2
0 dirichlet
2 dirichlet
)");
  CHECK_THROWS_AS(read_spatial_mesh(in), ParseError);
}

TEST_CASE("untagged boundary facet is rejected unless validation is off") {
  std::istringstream in(R"(stmesh 1
dim 2
nodes 3
0 0 0
1 1 0
2 0 1
elements 1
0 0 1 2
boundary 2
0 1 dirichlet
1 2 dirichlet
)");
  CHECK_THROWS_AS(read_spatial_mesh(in), ParseError);
  std::istringstream again(in.str());
  MeshReadOptions relaxed;
  relaxed.validate = false;
  CHECK(read_spatial_mesh(again, relaxed).num_elements() == 1);
}

TEST_CASE("write/read round-trip preserves coordinates exactly") {
  std::mt19937 rng(151);
  SpatialMesh mesh = testing::random_spatial_mesh(2, 40, rng);
  std::ostringstream out;
  write_spatial_mesh(out, mesh);
  std::istringstream in(out.str());
  SpatialMesh copy = read_spatial_mesh(in);
  REQUIRE(copy.num_nodes() == mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i)
    for (int c = 0; c < 2; ++c)
      CHECK(copy.coords[static_cast<std::size_t>(i)][c] ==
            mesh.coords[static_cast<std::size_t>(i)][c]);
  REQUIRE(copy.num_elements() == mesh.num_elements());
  CHECK(copy.boundary_tags == mesh.boundary_tags);
}

TEST_CASE("space-time mesh round-trip keeps elements, classes and provenance") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  std::ostringstream out;
  write_spacetime_mesh(out, st);
  std::istringstream in(out.str());
  SpaceTimeMesh copy = read_spacetime_mesh(in);
  CHECK(copy.num_nodes() == st.num_nodes());
  CHECK(copy.num_elements() == st.num_elements());
  CHECK(copy.nodes_per_level == st.nodes_per_level);
  REQUIRE(copy.boundary_facets.size() == st.boundary_facets.size());
  for (std::size_t i = 0; i < st.boundary_facets.size(); ++i) {
    CHECK(copy.boundary_facets[i].cls == st.boundary_facets[i].cls);
    CHECK(copy.boundary_facets[i].key == st.boundary_facets[i].key);
  }
}

TEST_CASE("gmsh 2.2 import restricted to simplices") {
  std::istringstream in(R"($MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
2
1 7 "robin_out"
2 1 "volume"
$EndPhysicalNames
$Nodes
4
1 0 0 0
2 1 0 0
3 0 1 0
4 1 1 0
$EndNodes
$Elements
6
1 2 2 1 1 1 2 3
2 2 2 1 1 2 4 3
3 1 2 7 1 1 2
4 1 2 1 2 2 4
5 1 2 1 3 4 3
6 1 2 1 4 3 1
$EndElements
)");
  SpatialMesh mesh = read_gmsh_mesh(in);
  CHECK(mesh.dim == 2);
  CHECK(mesh.num_nodes() == 4);
  CHECK(mesh.num_elements() == 2);
  int robin = 0;
  for (const auto& [key, tag] : mesh.boundary_tags)
    if (tag == SpatialTag::RobinOut) ++robin;
  CHECK(robin == 1);
}

TEST_CASE("deterministic output: identical inputs give byte-identical files") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  std::ostringstream a, b;
  write_spacetime_mesh(a, st);
  write_spacetime_mesh(b, extrude_multi(mesh, {0.0, 0.5, 1.0}));
  CHECK(a.str() == b.str());

  SliceComplex slice = slice_mesh(st, 0.3);
  std::ostringstream va, vb;
  write_vtk(va, slice, "t");
  write_vtk(vb, slice_mesh(st, 0.3), "t");
  CHECK(va.str() == vb.str());
}

TEST_CASE("vtk output layout") {
  SpatialMesh mesh = testing::two_triangle_square();
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 1.0});
  NodalField f;
  f.name = "height";
  f.components = 1;
  for (int i = 0; i < st.num_nodes(); ++i)
    f.values.push_back(st.coords[static_cast<std::size_t>(i)][2]);
  SliceComplex slice = slice_mesh(st, 0.5, {f});
  std::ostringstream out;
  write_vtk(out, slice, "demo");
  const std::string text = out.str();
  CHECK(text.find("# vtk DataFile Version 3.0") == 0);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("POINT_DATA") != std::string::npos);
  CHECK(text.find("SCALARS height double 1") != std::string::npos);
  // 17 significant digits in fixed scientific notation.
  CHECK(text.find("5.0000000000000000e-01") != std::string::npos);
}

TEST_CASE("matrix market round-trip") {
  std::mt19937 rng(157);
  std::vector<Eigen::Triplet<double>> trip;
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      if ((i + 2 * j) % 3 == 0) trip.emplace_back(i, j, dist(rng));
  SpMat m(10, 10);
  m.setFromTriplets(trip.begin(), trip.end());

  std::ostringstream out;
  write_matrix_market(out, m);
  std::istringstream in(out.str());
  SpMat copy = read_matrix_market(in);
  Eigen::MatrixXd diff = Eigen::MatrixXd(m) - Eigen::MatrixXd(copy);
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("run config parsing and validation") {
  std::istringstream in(R"(# pump run
T = 1.0
slabs = 8
motion = pump
motion_amplitude = 0.1
pump_z_only = true
problem = pump
nu = 0.05
sigma_u = 20
sigma_p = 0.2
gmres_tol = 1e-6
slices = 0.1, 0.5, 0.9
out_dir = out
)");
  RunConfig config = parse_run_config(in);
  config.validate();
  CHECK(config.slabs == 8);
  CHECK(config.motion == "pump");
  CHECK(config.pump_z_only);
  CHECK(config.solver.sigma_u == doctest::Approx(20.0));
  CHECK(config.solver.gmres.rel_tol == doctest::Approx(1e-6));
  REQUIRE(config.slice_times.size() == 3);
  CHECK(config.slice_times[1] == doctest::Approx(0.5));

  std::istringstream bad("unknown_key = 1\n");
  CHECK_THROWS_AS(parse_run_config(bad), ParseError);

  std::istringstream bad_tol("gmres_tol = 2.0\n");
  RunConfig invalid = parse_run_config(bad_tol);
  CHECK_THROWS_AS(invalid.validate(), Error);
}
