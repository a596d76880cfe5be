#ifndef STMESH_QUADRATURE_HPP
#define STMESH_QUADRATURE_HPP

#include <span>
#include <vector>

#include "stmesh/types.hpp"

namespace stmesh {

// Quadrature on the reference n-simplex conv(0, e_1, ..., e_n). Points are
// stored as barycentric coordinates (n+1 entries); reference weights sum to
// the reference volume 1/n!.
struct QuadratureRule {
  int dim = 0;
  int exact_degree = 0;
  std::vector<Eigen::VectorXd> bary;
  std::vector<double> weights;

  int num_points() const { return static_cast<int>(weights.size()); }
};

// Grundmann-Moller rule exact for polynomials of the requested degree
// (n in 1..4, degree <= 5; even degrees round up to the next odd rule).
// Throws Error for unsupported requests. Returned references are cached.
const QuadratureRule& simplex_quadrature(int dim, int degree);

// Physical location of a barycentric quadrature point on a simplex.
Point quadrature_point(const Eigen::VectorXd& bary, std::span<const Point> verts);

// Physical weight factor: reference weights must be multiplied by
// measure * dim! to integrate over a simplex of the given measure.
double quadrature_scale(double measure, int dim);

}  // namespace stmesh

#endif
