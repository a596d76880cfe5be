#ifndef STMESH_SOLVER_HPP
#define STMESH_SOLVER_HPP

#include <vector>

#include "stmesh/stokes.hpp"

namespace stmesh {

// Level-of-fill incomplete LU factorization of a square sparse matrix.
// Tiny pivots are replaced by a sign-preserving floor so that factorizations
// of singular matrices (constant-pressure kernel) stay usable.
class IncompleteLU {
 public:
  static IncompleteLU factorize(const SpMat& a, int fill_level);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  long rows() const { return static_cast<long>(row_start_.size()) - 1; }
  long nonzeros() const { return static_cast<long>(cols_.size()); }

 private:
  // Combined CSR storage of L (strict lower, unit diagonal implied) and U.
  std::vector<int> row_start_;
  std::vector<int> cols_;
  std::vector<double> values_;
  std::vector<int> diag_pos_;  // position of the diagonal entry per row
};

struct SolveResult {
  Eigen::VectorXd velocity;  // full velocity coefficients (lifting included)
  Eigen::VectorXd pressure;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // true relative residuals, [0] = 1
};

// Restarted GMRES with right preconditioning on the saddle-point system
// [[K, -B^T], [B, D]]. The BlockDiag preconditioner applies ILU(0) of K and
// ILU(2) of D + B diag(K)^{-1} B^T. Throws SolverError when the iteration
// limit is reached without meeting config.gmres.rel_tol (the residual history
// is embedded in the message).
SolveResult gmres_solve(const BlockSystem& system, const SolverConfig& config);

// Plain GMRES on a single sparse operator; used by tests and the Schur side.
struct GmresScratch {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};
Eigen::VectorXd gmres(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                      const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& precondition,
                      const Eigen::VectorXd& rhs, const GmresConfig& config, GmresScratch& stats);

}  // namespace stmesh

#endif
