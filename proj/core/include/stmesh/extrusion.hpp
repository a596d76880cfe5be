#ifndef STMESH_EXTRUSION_HPP
#define STMESH_EXTRUSION_HPP

#include <functional>
#include <vector>

#include "stmesh/mesh.hpp"

namespace stmesh {

// Tensor-product extension of a d-simplex over one time slab. Bottom and top
// carry the same node ordering; top nodes may be displaced copies.
struct Hyperprism {
  std::vector<NodeId> bottom;  // d+1 node ids at t0
  std::vector<NodeId> top;     // d+1 node ids at t0 + tau, top[i] copies bottom[i]
  double tau = 0.0;
};

// One slab of the extrusion: time interval and the displacement applied to
// each spatial node at the bottom and top levels.
struct SlabSpec {
  double t_start = 0.0;
  double tau = 0.0;
  std::vector<Point> bottom_displacement;  // per spatial node, R^d
  std::vector<Point> top_displacement;
};

// Splits the hyperprism into d+1 simplices:
//   S^i = [p_i', ..., p_{d+1}', p_1'', ..., p_i''],  i = 1..d+1.
// Pairwise disjoint interiors, union equal to the prism. Throws
// DegenerateElementError for tau <= 0.
std::vector<Simplex> decompose_hyperprism(const Hyperprism& prism);

struct ExtrudeOptions {
  bool check_consistency = true;  // refuse inputs that are not consistently numbered
  bool check_degeneracy = true;   // refuse slabs that produce (near-)degenerate simplices
  // |measure| > degeneracy_rel_tol * h^{d+1} is required of every element.
  double degeneracy_rel_tol = 1e-12;
};

// Extrudes one slab: N*(d+1) simplices on 2 * num_nodes space-time nodes
// (bottom level first). Facets are not extracted; use extrude_multi for a
// fully classified mesh.
SpaceTimeMesh extrude_slab(const SpatialMesh& mesh, const SlabSpec& slab,
                           const ExtrudeOptions& options = {});

// Displacement fields per time level; level_times has K+1 entries. Entry k
// holds, for every spatial node, its displacement at time level k.
using LevelDisplacements = std::vector<std::vector<Point>>;

// Stacks K slabs over the given time partition, merging interface nodes by
// construction (level k top == level k+1 bottom). The result carries
// classified boundary facets and per-element mesh sizes.
SpaceTimeMesh extrude_multi(const SpatialMesh& mesh, const std::vector<double>& time_partition,
                            const LevelDisplacements& displacements,
                            const ExtrudeOptions& options = {});

// Zero-motion convenience overload.
SpaceTimeMesh extrude_multi(const SpatialMesh& mesh, const std::vector<double>& time_partition,
                            const ExtrudeOptions& options = {});

// Classifies boundary facets: bottom copies of spatial elements become
// Sigma0, top copies SigmaT, mantle facets inherit the spatial boundary tag
// (SigmaD for Dirichlet / DirichletMoving, SigmaR for Robin tags). Throws
// AdmissibilityError for unclassifiable boundary facets.
void classify_boundary(SpaceTimeMesh& stmesh, const SpatialMesh& spatial);

}  // namespace stmesh

#endif
