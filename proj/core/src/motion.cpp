#include "stmesh/motion.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Sparse>

namespace stmesh {

Point eval_motion(const MotionSpec& spec, const Point& x, double t) {
  if (t < -1e-14 || t > spec.time_horizon + 1e-14) {
    std::ostringstream msg;
    msg << "motion evaluated outside [0, " << spec.time_horizon << "]: t = " << t;
    throw Error(msg.str());
  }
  const double s = std::sin(M_PI * t);
  switch (spec.kind) {
    case MotionKind::None:
      return Point::Zero();
    case MotionKind::BuiltinPump: {
      const double r2 = (x[0] * x[0] + x[1] * x[1]) / (spec.pump_radius * spec.pump_radius);
      const double height = spec.pump_z0 + spec.pump_amplitude * s * s * (1.0 - r2);
      Point g = Point::Zero();
      if (spec.pump_z_only) {
        g[2] = height - x[2];
      } else {
        g[2] = height;
        g -= x;
        g[3] = 0.0;
      }
      return g;
    }
    case MotionKind::BuiltinYPipe: {
      Point g = Point::Zero();
      g[2] = spec.ypipe_scale * std::abs(x[2] + spec.ypipe_offset) * s * s;
      return g;
    }
    case MotionKind::UserField:
      if (!spec.user_field) throw Error("UserField motion without a field function");
      return spec.user_field(x, t);
  }
  return Point::Zero();
}

std::vector<bool> moving_node_mask(const SpatialMesh& mesh, const MotionSpec& spec) {
  std::vector<bool> mask(static_cast<std::size_t>(mesh.num_nodes()), false);
  for (const auto& [key, tag] : mesh.boundary_tags) {
    if (!spec.moving_tags.count(tag)) continue;
    for (int i = 0; i < key.num_nodes(); ++i)
      mask[static_cast<std::size_t>(key.nodes[static_cast<std::size_t>(i)])] = true;
  }
  return mask;
}

DisplacementField smooth_displacement(const SpatialMesh& mesh,
                                      const std::vector<bool>& is_boundary,
                                      const DisplacementField& boundary_values, double rel_tol) {
  const int n = mesh.num_nodes();
  const int d = mesh.dim;

  std::vector<int> interior_index(static_cast<std::size_t>(n), -1);
  int num_interior = 0;
  int num_boundary = 0;
  for (int i = 0; i < n; ++i) {
    if (is_boundary[static_cast<std::size_t>(i)]) {
      ++num_boundary;
    } else {
      interior_index[static_cast<std::size_t>(i)] = num_interior++;
    }
  }
  if (num_boundary == 0) throw Error("smoothing requires a non-empty boundary");

  DisplacementField out(static_cast<std::size_t>(n), Point::Zero());
  for (int i = 0; i < n; ++i)
    if (is_boundary[static_cast<std::size_t>(i)]) out[static_cast<std::size_t>(i)] = boundary_values[static_cast<std::size_t>(i)];
  if (num_interior == 0) return out;

  // P1 stiffness: K_ij = |tau| grad(lambda_i) . grad(lambda_j).
  std::vector<Eigen::Triplet<double>> interior_trip;
  Eigen::MatrixXd boundary_rhs = Eigen::MatrixXd::Zero(num_interior, d);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Simplex& el = mesh.elements[static_cast<std::size_t>(e)];
    auto pts = mesh.element_points(e);
    const double measure = simplex_measure(pts, d);
    if (!(measure > 0.0)) throw DegenerateElementError("degenerate element in smoothing mesh");

    Eigen::MatrixXd a(d + 1, d + 1);
    for (int j = 0; j <= d; ++j) {
      a(0, j) = 1.0;
      a.col(j).tail(d) = pts[static_cast<std::size_t>(j)].head(d);
    }
    // Rows of a^{-T} hold the affine coefficients of the barycentric basis.
    Eigen::MatrixXd coeff = a.partialPivLu().inverse().transpose();
    Eigen::MatrixXd grads = coeff.rightCols(d);  // (d+1) x d

    for (int i = 0; i <= d; ++i) {
      const NodeId ni = el[i];
      const int row = interior_index[static_cast<std::size_t>(ni)];
      if (row < 0) continue;
      for (int j = 0; j <= d; ++j) {
        const NodeId nj = el[j];
        const double k_ij = measure * grads.row(i).dot(grads.row(j));
        const int col = interior_index[static_cast<std::size_t>(nj)];
        if (col >= 0) {
          interior_trip.emplace_back(row, col, k_ij);
        } else {
          boundary_rhs.row(row) -=
              k_ij * boundary_values[static_cast<std::size_t>(nj)].head(d).transpose();
        }
      }
    }
  }

  Eigen::SparseMatrix<double> stiffness(num_interior, num_interior);
  stiffness.setFromTriplets(interior_trip.begin(), interior_trip.end());

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(rel_tol);
  cg.setMaxIterations(20 * num_interior + 100);
  cg.compute(stiffness);
  if (cg.info() != Eigen::Success) throw SolverError("smoothing stiffness factorization failed");

  for (int c = 0; c < d; ++c) {
    Eigen::VectorXd rhs = boundary_rhs.col(c);
    if (rhs.norm() == 0.0) continue;
    Eigen::VectorXd sol = cg.solve(rhs);
    if (cg.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "smoothing solve did not converge (component " << c << ", residual " << cg.error()
          << ")";
      throw SolverError(msg.str());
    }
    for (int i = 0; i < n; ++i) {
      const int row = interior_index[static_cast<std::size_t>(i)];
      if (row >= 0) out[static_cast<std::size_t>(i)][c] = sol(row);
    }
  }
  return out;
}

LevelDisplacements build_level_displacements(const SpatialMesh& mesh, const MotionSpec& spec,
                                             const std::vector<double>& time_partition) {
  const int n = mesh.num_nodes();
  LevelDisplacements levels;
  levels.reserve(time_partition.size());
  if (spec.kind == MotionKind::None) {
    levels.assign(time_partition.size(),
                  DisplacementField(static_cast<std::size_t>(n), Point::Zero()));
    return levels;
  }

  std::vector<bool> boundary = boundary_node_mask(mesh);
  std::vector<bool> moving = moving_node_mask(mesh, spec);

  for (double t : time_partition) {
    DisplacementField boundary_values(static_cast<std::size_t>(n), Point::Zero());
    for (int i = 0; i < n; ++i)
      if (moving[static_cast<std::size_t>(i)])
        boundary_values[static_cast<std::size_t>(i)] =
            eval_motion(spec, mesh.coords[static_cast<std::size_t>(i)], t);

    if (spec.smoothing == SmoothingPolicy::Laplacian) {
      levels.push_back(smooth_displacement(mesh, boundary, boundary_values));
    } else {
      DisplacementField field(static_cast<std::size_t>(n), Point::Zero());
      for (int i = 0; i < n; ++i)
        if (moving[static_cast<std::size_t>(i)]) field[static_cast<std::size_t>(i)] = boundary_values[static_cast<std::size_t>(i)];
      levels.push_back(std::move(field));
    }
  }
  return levels;
}

}  // namespace stmesh
