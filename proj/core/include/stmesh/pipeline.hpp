#ifndef STMESH_PIPELINE_HPP
#define STMESH_PIPELINE_HPP

#include <string>

#include "stmesh/admissibility.hpp"
#include "stmesh/mesh_io.hpp"
#include "stmesh/motion.hpp"
#include "stmesh/problems.hpp"
#include "stmesh/run_config.hpp"
#include "stmesh/slicing.hpp"
#include "stmesh/solver.hpp"
#include "stmesh/vtk.hpp"

namespace stmesh {

MotionSpec motion_from_config(const RunConfig& config);

// make_consistent + optional checks + displacement fields + extrude_multi.
SpaceTimeMesh extrude_from_config(const SpatialMesh& mesh, const RunConfig& config);

// Nodal velocity field averaged over the elements sharing each node, plus the
// elementwise values needed for cell data on slices.
NodalField average_velocity_field(const SpaceTimeMesh& mesh, const Eigen::VectorXd& velocity,
                                  const std::string& name = "velocity");

// Writes slice_<index>.vtk for every requested time; when a solution is given
// the slices carry point velocity plus cell pressure/velocity data.
void write_solution_slices(const std::string& out_dir, const SpaceTimeMesh& mesh,
                           const std::vector<double>& times, const SolveResult* solution);

struct SolveOutcome {
  SpaceTimeMesh mesh;
  SolveResult solution;
  long velocity_dofs = 0;
  long pressure_dofs = 0;
};

// Full pipeline for pump/ypipe/constant problems on a given spatial mesh:
// extrude, assemble, solve, write slices / residual history / optional
// MatrixMarket export into out_dir.
SolveOutcome run_solve(const SpatialMesh& mesh, const RunConfig& config);

// L2(Q) errors against a manufactured solution; pressure is compared after
// subtracting the mean of both fields over Q.
struct SolutionErrors {
  double velocity_l2 = 0.0;
  double pressure_l2 = 0.0;
};
SolutionErrors manufactured_errors(const SpaceTimeMesh& mesh, const SolveResult& solution,
                                   const Manufactured1d& exact);

struct ConvergenceRow {
  int cells = 0;
  long velocity_dofs = 0;
  double velocity_l2 = 0.0;
  double pressure_l2 = 0.0;
  int iterations = 0;
};

// Manufactured d=1 refinement sweep (mesh n, 2n, 4n, ...); writes errors.csv
// into out_dir when it is non-empty.
std::vector<ConvergenceRow> run_manufactured_sweep(const RunConfig& config);

}  // namespace stmesh

#endif
