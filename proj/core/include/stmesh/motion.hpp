#ifndef STMESH_MOTION_HPP
#define STMESH_MOTION_HPP

#include <functional>
#include <set>
#include <vector>

#include "stmesh/extrusion.hpp"
#include "stmesh/mesh.hpp"

namespace stmesh {

enum class MotionKind { None, BuiltinPump, BuiltinYPipe, UserField };
enum class SmoothingPolicy { BoundaryOnly, Laplacian };

// Prescribed boundary displacement g_mov(X, t) on the tagged parts of the
// initial boundary, plus the policy used to propagate it into the domain.
struct MotionSpec {
  MotionKind kind = MotionKind::None;
  SmoothingPolicy smoothing = SmoothingPolicy::Laplacian;
  std::set<SpatialTag> moving_tags = {SpatialTag::DirichletMoving};
  double time_horizon = 1.0;

  // Pump membrane: target height z0 + amplitude * sin^2(pi t) (1 - (X0^2+X1^2)/R^2).
  double pump_z0 = 0.4;
  double pump_radius = 0.75;
  double pump_amplitude = 1.0;
  // The printed formula subtracts the full point X, which also moves the x/y
  // coordinates of membrane points; the z_only switch subtracts only X_z.
  bool pump_z_only = false;

  // Y-pipe strips: 4 |X_z + 3| / 7 sin^2(pi t) e_z.
  double ypipe_scale = 4.0 / 7.0;
  double ypipe_offset = 3.0;

  // UserField displacement, called for tagged boundary points.
  std::function<Point(const Point& x, double t)> user_field;
};

// Displacement of a boundary point X at time t. X must lie on a moving-tagged
// part of the initial boundary; on other points the builtins return zero.
// Throws Error for t outside [0, time_horizon].
Point eval_motion(const MotionSpec& spec, const Point& x, double t);

// Per-node displacement vectors at a fixed time level.
using DisplacementField = std::vector<Point>;

// Componentwise discrete Laplace smoothing: piecewise-linear continuous
// elements on the spatial mesh, Dirichlet data given on every boundary node.
// boundary_values[i] is ignored unless is_boundary[i]. Relative residual of
// each component solve is at most rel_tol. Throws SolverError on failure and
// Error when the mesh has no boundary nodes.
DisplacementField smooth_displacement(const SpatialMesh& mesh,
                                      const std::vector<bool>& is_boundary,
                                      const DisplacementField& boundary_values,
                                      double rel_tol = 1e-10);

// Builds per-level displacement fields for extrude_multi: moving-tagged
// boundary nodes get eval_motion, the remaining boundary stays fixed, and
// interior nodes follow the smoothing policy.
LevelDisplacements build_level_displacements(const SpatialMesh& mesh, const MotionSpec& spec,
                                             const std::vector<double>& time_partition);

// Nodes on facets whose tag belongs to spec.moving_tags.
std::vector<bool> moving_node_mask(const SpatialMesh& mesh, const MotionSpec& spec);

}  // namespace stmesh

#endif
