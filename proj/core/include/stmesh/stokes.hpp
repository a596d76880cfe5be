#ifndef STMESH_STOKES_HPP
#define STMESH_STOKES_HPP

#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "stmesh/dg_space.hpp"
#include "stmesh/quadrature.hpp"

namespace stmesh {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Fields are evaluated at space-time points (time in component mesh.dim-1
// ... i.e. x[d] for spatial dimension d). Vector fields return d components.
using VectorField = std::function<Point(const Point& xt)>;
using ScalarField = std::function<double(const Point& xt)>;

struct ProblemData {
  double nu = 1.0;
  VectorField f;     // volumetric source; null means zero
  VectorField g_D;   // Dirichlet velocity, global analytic extension
  VectorField g_R;   // Robin datum; null means zero (as in the valve setup)
  VectorField u0;    // initial velocity on Sigma_0
  // Robin coefficient; receives the facet's spatial tag so valves can
  // distinguish inflow from outflow. Null means zero.
  std::function<double(const Point& xt, SpatialTag tag)> alpha_R;
  // Optional mass source for manufactured problems: div(u) = g instead of 0.
  ScalarField div_source;
};

struct GmresConfig {
  int restart = 50;
  int max_iter = 500;
  double rel_tol = 1e-5;  // the reference tolerance used in the experiments
};

enum class PreconditionerKind { None, BlockDiag };

struct SolverConfig {
  double sigma_u = 40.0;  // 10 (p+1)^2 for p = 1
  double sigma_p = 0.1;
  int volume_quadrature_degree = 3;
  int facet_quadrature_degree = 3;
  GmresConfig gmres;
  PreconditionerKind preconditioner = PreconditionerKind::BlockDiag;

  void validate() const;
};

// Valve coefficients: outflow boundaries are penalized shut on [0, 1/2) and
// open on [1/2, 1]; inflow the other way around.
double robin_valve(double t, SpatialTag tag);

// Scalar facet trace operators for an interior facet with unit normal n
// outward from the lower-index element k.
Point facet_jump(double phi_k, double phi_l, const Point& n);
Point facet_space_jump(double phi_k, double phi_l, const Point& n, int spatial_dim);
double facet_time_jump(double phi_k, double phi_l, const Point& n, int spatial_dim);
double facet_average(double phi_k, double phi_l);
double facet_upwind(double phi_k, double phi_l, const Point& n, int spatial_dim);

// Term masks, mainly for tests that probe individual parts.
enum AhTerm : unsigned {
  kAhVolume = 1u,
  kAhConsistency = 2u,
  kAhPenalty = 4u,
  kAhRobin = 8u,
  kAhAll = 15u,
};
enum BtTerm : unsigned {
  kBtVolume = 1u,
  kBtSigmaT = 2u,
  kBtUpwind = 4u,
  kBtAll = 7u,
};

struct BlockSystem {
  SpMat K;  // free velocity x free velocity, b_T + a_h (nonsymmetric)
  SpMat B;  // pressure x free velocity
  SpMat D;  // pressure x pressure, symmetric positive semidefinite
  Eigen::VectorXd F1;
  Eigen::VectorXd F2;

  // Dirichlet lifting bookkeeping: full velocity vector u_g and the map from
  // free dof index to full dof index.
  Eigen::VectorXd u_g;
  std::vector<int> free_dofs;
  long full_velocity_dofs = 0;

  Eigen::VectorXd expand_velocity(const Eigen::VectorXd& u_free) const;
};

// Assembly context for one mesh; all operations are deterministic and leave
// the mesh untouched.
class StokesAssembler {
 public:
  StokesAssembler(const SpaceTimeMesh& mesh, const SolverConfig& config);

  const DgSpace& velocity_space() const { return vspace_; }
  const DgSpace& pressure_space() const { return pspace_; }
  const std::vector<ElementBasis>& bases() const { return bases_; }

  // Diffusion + interior penalty + Robin mass, on the full velocity space.
  SpMat assemble_a_h(const ProblemData& data, unsigned terms = kAhAll) const;

  // Time derivative, top boundary and upwind terms; if f1 is non-null the
  // initial datum pairing <u0, v> on Sigma_0 is accumulated into it.
  SpMat assemble_b_T(const ProblemData& data, unsigned terms = kBtAll,
                     Eigen::VectorXd* f1 = nullptr) const;

  SpMat assemble_b_p() const;  // pressure rows, velocity columns
  SpMat assemble_d_p() const;

  Eigen::VectorXd assemble_source(const ProblemData& data) const;  // <f, v>_Q
  Eigen::VectorXd l2_project_dirichlet(const ProblemData& data) const;

  // Velocity dofs fixed to zero by the strong trace condition on Sigma_D.
  std::vector<bool> dirichlet_dof_mask() const;

  BlockSystem build_block_system(const ProblemData& data) const;

 private:
  const SpaceTimeMesh& mesh_;
  SolverConfig config_;
  DgSpace vspace_;
  DgSpace pspace_;
  std::vector<ElementBasis> bases_;
  std::vector<bool> touches_dirichlet_;  // per element

  int dim() const { return mesh_.dim; }
  int sdim() const { return mesh_.dim - 1; }
};

}  // namespace stmesh

#endif
