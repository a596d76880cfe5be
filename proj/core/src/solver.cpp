#include "stmesh/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace stmesh {

IncompleteLU IncompleteLU::factorize(const SpMat& a, int fill_level) {
  const long n = a.rows();
  if (a.cols() != n) throw Error("ILU requires a square matrix");

  // Symbolic phase: per-row column pattern with fill levels.
  std::vector<std::vector<int>> pattern(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> upper_cols(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> upper_levels(static_cast<std::size_t>(n));

  std::map<int, int> work;  // column -> level, ordered
  for (long i = 0; i < n; ++i) {
    work.clear();
    for (SpMat::InnerIterator it(a, static_cast<int>(i)); it; ++it)
      work[static_cast<int>(it.col())] = 0;
    work[static_cast<int>(i)];  // ensure a diagonal slot

    for (auto wit = work.begin(); wit != work.end() && wit->first < i; ++wit) {
      const int k = wit->first;
      const int lev_ik = wit->second;
      if (lev_ik > fill_level) continue;
      const auto& ucols = upper_cols[static_cast<std::size_t>(k)];
      const auto& ulevs = upper_levels[static_cast<std::size_t>(k)];
      for (std::size_t p = 0; p < ucols.size(); ++p) {
        const int j = ucols[p];
        if (j <= k) continue;
        const int lev = lev_ik + ulevs[p] + 1;
        if (lev > fill_level) continue;
        auto ins = work.emplace(j, lev);
        if (!ins.second) ins.first->second = std::min(ins.first->second, lev);
      }
    }

    auto& row = pattern[static_cast<std::size_t>(i)];
    for (const auto& [col, lev] : work) {
      if (lev > fill_level) continue;
      row.push_back(col);
      if (col >= i) {
        upper_cols[static_cast<std::size_t>(i)].push_back(col);
        upper_levels[static_cast<std::size_t>(i)].push_back(lev);
      }
    }
  }

  IncompleteLU ilu;
  ilu.row_start_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (long i = 0; i < n; ++i)
    ilu.row_start_[static_cast<std::size_t>(i) + 1] =
        ilu.row_start_[static_cast<std::size_t>(i)] +
        static_cast<int>(pattern[static_cast<std::size_t>(i)].size());
  ilu.cols_.resize(static_cast<std::size_t>(ilu.row_start_.back()));
  ilu.values_.assign(ilu.cols_.size(), 0.0);
  ilu.diag_pos_.assign(static_cast<std::size_t>(n), -1);
  for (long i = 0; i < n; ++i) {
    int pos = ilu.row_start_[static_cast<std::size_t>(i)];
    for (int col : pattern[static_cast<std::size_t>(i)]) {
      ilu.cols_[static_cast<std::size_t>(pos)] = col;
      if (col == i) ilu.diag_pos_[static_cast<std::size_t>(i)] = pos;
      ++pos;
    }
  }

  double max_diag = 0.0;
  for (long i = 0; i < n; ++i)
    for (SpMat::InnerIterator it(a, static_cast<int>(i)); it; ++it)
      if (it.col() == i) max_diag = std::max(max_diag, std::abs(it.value()));
  const double pivot_floor = 1e-13 * (max_diag > 0.0 ? max_diag : 1.0);

  // Numeric phase (IKJ) on the fixed pattern.
  std::vector<double> dense(static_cast<std::size_t>(n), 0.0);
  for (long i = 0; i < n; ++i) {
    const int begin = ilu.row_start_[static_cast<std::size_t>(i)];
    const int end = ilu.row_start_[static_cast<std::size_t>(i) + 1];
    for (int p = begin; p < end; ++p) dense[static_cast<std::size_t>(ilu.cols_[static_cast<std::size_t>(p)])] = 0.0;
    for (SpMat::InnerIterator it(a, static_cast<int>(i)); it; ++it)
      dense[static_cast<std::size_t>(it.col())] = it.value();

    for (int p = begin; p < end; ++p) {
      const int k = ilu.cols_[static_cast<std::size_t>(p)];
      if (k >= i) break;
      const int kdiag = ilu.diag_pos_[static_cast<std::size_t>(k)];
      const double factor = dense[static_cast<std::size_t>(k)] / ilu.values_[static_cast<std::size_t>(kdiag)];
      dense[static_cast<std::size_t>(k)] = factor;
      const int kend = ilu.row_start_[static_cast<std::size_t>(k) + 1];
      for (int kp = kdiag + 1; kp < kend; ++kp) {
        const int j = ilu.cols_[static_cast<std::size_t>(kp)];
        // Update only pattern positions of row i.
        const int* lo = ilu.cols_.data() + p + 1;
        const int* hi = ilu.cols_.data() + end;
        const int* found = std::lower_bound(lo, hi, j);
        if (found != hi && *found == j)
          dense[static_cast<std::size_t>(j)] -= factor * ilu.values_[static_cast<std::size_t>(kp)];
      }
    }

    for (int p = begin; p < end; ++p)
      ilu.values_[static_cast<std::size_t>(p)] = dense[static_cast<std::size_t>(ilu.cols_[static_cast<std::size_t>(p)])];
    const int dp = ilu.diag_pos_[static_cast<std::size_t>(i)];
    double& diag = ilu.values_[static_cast<std::size_t>(dp)];
    if (std::abs(diag) < pivot_floor) diag = diag < 0.0 ? -pivot_floor : pivot_floor;
  }
  return ilu;
}

Eigen::VectorXd IncompleteLU::solve(const Eigen::VectorXd& rhs) const {
  const long n = rows();
  Eigen::VectorXd x = rhs;
  // Forward: L y = rhs, unit diagonal.
  for (long i = 0; i < n; ++i) {
    double sum = x(i);
    const int begin = row_start_[static_cast<std::size_t>(i)];
    const int dp = diag_pos_[static_cast<std::size_t>(i)];
    for (int p = begin; p < dp; ++p) sum -= values_[static_cast<std::size_t>(p)] * x(cols_[static_cast<std::size_t>(p)]);
    x(i) = sum;
  }
  // Backward: U x = y.
  for (long i = n - 1; i >= 0; --i) {
    double sum = x(i);
    const int dp = diag_pos_[static_cast<std::size_t>(i)];
    const int end = row_start_[static_cast<std::size_t>(i) + 1];
    for (int p = dp + 1; p < end; ++p) sum -= values_[static_cast<std::size_t>(p)] * x(cols_[static_cast<std::size_t>(p)]);
    x(i) = sum / values_[static_cast<std::size_t>(dp)];
  }
  return x;
}

Eigen::VectorXd gmres(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                      const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& precondition,
                      const Eigen::VectorXd& rhs, const GmresConfig& config, GmresScratch& stats) {
  const long n = rhs.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  stats.iterations = 0;
  stats.converged = false;
  stats.residual_history.clear();
  stats.residual_history.push_back(1.0);
  if (bnorm == 0.0) {
    stats.converged = true;
    return x;
  }
  const double target = config.rel_tol * bnorm;
  const int m = config.restart;

  Eigen::VectorXd r = rhs - apply(x);
  double beta = r.norm();
  if (beta <= target) {
    stats.converged = true;
    return x;
  }

  std::vector<Eigen::VectorXd> basis;
  Eigen::MatrixXd hess(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);

  while (stats.iterations < config.max_iter) {
    basis.assign(1, r / beta);
    hess.setZero();
    g.setZero();
    g(0) = beta;
    int j = 0;
    for (; j < m && stats.iterations < config.max_iter; ++j) {
      ++stats.iterations;
      Eigen::VectorXd w = apply(precondition(basis[static_cast<std::size_t>(j)]));
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = w.dot(basis[static_cast<std::size_t>(i)]);
        w -= hess(i, j) * basis[static_cast<std::size_t>(i)];
      }
      // One re-orthogonalization pass keeps the basis usable near breakdown.
      for (int i = 0; i <= j; ++i) {
        const double corr = w.dot(basis[static_cast<std::size_t>(i)]);
        hess(i, j) += corr;
        w -= corr * basis[static_cast<std::size_t>(i)];
      }
      const double subdiag = w.norm();
      hess(j + 1, j) = subdiag;
      if (subdiag > 0.0) basis.push_back(w / subdiag);

      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * hess(i, j) + sn(i) * hess(i + 1, j);
        hess(i + 1, j) = -sn(i) * hess(i, j) + cs(i) * hess(i + 1, j);
        hess(i, j) = t;
      }
      const double denom = std::hypot(hess(j, j), hess(j + 1, j));
      if (denom == 0.0) {
        cs(j) = 1.0;
        sn(j) = 0.0;
      } else {
        cs(j) = hess(j, j) / denom;
        sn(j) = hess(j + 1, j) / denom;
      }
      hess(j, j) = cs(j) * hess(j, j) + sn(j) * hess(j + 1, j);
      hess(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);

      stats.residual_history.push_back(std::abs(g(j + 1)) / bnorm);
      if (std::abs(g(j + 1)) <= target || subdiag == 0.0) {
        ++j;
        break;
      }
    }

    Eigen::VectorXd y =
        hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    Eigen::VectorXd update = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < j; ++i) update += y(i) * basis[static_cast<std::size_t>(i)];
    x += precondition(update);

    r = rhs - apply(x);
    beta = r.norm();
    stats.residual_history.back() = beta / bnorm;  // replace estimate by true residual
    if (beta <= target) {
      stats.converged = true;
      return x;
    }
  }
  return x;
}

SolveResult gmres_solve(const BlockSystem& system, const SolverConfig& config) {
  config.validate();
  const long nu = system.K.rows();
  const long np = system.D.rows();

  SpMat bt = SpMat(system.B.transpose());

  auto apply = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(nu + np);
    out.head(nu) = system.K * v.head(nu) - bt * v.tail(np);
    out.tail(np) = system.B * v.head(nu) + system.D * v.tail(np);
    return out;
  };

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> precondition =
      [](const Eigen::VectorXd& v) { return v; };

  IncompleteLU ilu_k, ilu_s;
  if (config.preconditioner == PreconditionerKind::BlockDiag) {
    ilu_k = IncompleteLU::factorize(system.K, 0);

    Eigen::VectorXd diag_inv(nu);
    for (long i = 0; i < nu; ++i) {
      double d = 0.0;
      for (SpMat::InnerIterator it(system.K, static_cast<int>(i)); it; ++it)
        if (it.col() == i) d = it.value();
      diag_inv(i) = std::abs(d) > 1e-300 ? 1.0 / d : 0.0;
    }
    SpMat schur = system.D;
    {
      SpMat scaled_bt = bt;
      for (int row = 0; row < scaled_bt.outerSize(); ++row)
        for (SpMat::InnerIterator it(scaled_bt, row); it; ++it)
          it.valueRef() *= diag_inv(row);
      SpMat prod = SpMat(system.B * scaled_bt);
      schur += prod;
    }
    ilu_s = IncompleteLU::factorize(schur, 2);

    precondition = [&ilu_k, &ilu_s, nu, np](const Eigen::VectorXd& v) {
      Eigen::VectorXd out(nu + np);
      out.head(nu) = ilu_k.solve(v.head(nu));
      out.tail(np) = ilu_s.solve(v.tail(np));
      return out;
    };
  }

  Eigen::VectorXd rhs(nu + np);
  rhs.head(nu) = system.F1;
  rhs.tail(np) = system.F2;

  GmresScratch stats;
  Eigen::VectorXd sol = gmres(apply, precondition, rhs, config.gmres, stats);

  if (!stats.converged) {
    std::ostringstream msg;
    msg << "GMRES did not reach rel_tol " << config.gmres.rel_tol << " within "
        << stats.iterations << " iterations; residual history:";
    for (double r : stats.residual_history) msg << ' ' << r;
    throw SolverError(msg.str());
  }

  SolveResult result;
  result.iterations = stats.iterations;
  result.converged = stats.converged;
  result.residual_history = std::move(stats.residual_history);
  result.velocity = system.expand_velocity(sol.head(nu));
  result.pressure = sol.tail(np);
  return result;
}

}  // namespace stmesh
