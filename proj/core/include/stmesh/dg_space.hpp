#ifndef STMESH_DG_SPACE_HPP
#define STMESH_DG_SPACE_HPP

#include <vector>

#include "stmesh/mesh.hpp"

namespace stmesh {

enum class DgSpaceKind { VelocityP1Vector, PressureP0 };

// Fully discontinuous, element-local polynomial space on a space-time mesh:
// vector-valued P1 (d components, nodal basis on the d+2 element nodes) for
// the velocity, scalar P0 for the pressure.
struct DgSpace {
  const SpaceTimeMesh* mesh = nullptr;
  DgSpaceKind kind = DgSpaceKind::VelocityP1Vector;

  int spatial_components() const { return mesh->spatial_dim(); }
  int nodes_per_element() const { return mesh->dim + 1; }

  int dofs_per_element() const {
    return kind == DgSpaceKind::VelocityP1Vector ? nodes_per_element() * spatial_components() : 1;
  }
  // Velocity dof layout: ((elem * nodes + local_node) * d + component).
  int vdof(int elem, int local_node, int comp) const {
    return (elem * nodes_per_element() + local_node) * spatial_components() + comp;
  }
  int pdof(int elem) const { return elem; }
};

// Total dof count: N (d+2) d for velocity with p=1, N for pressure with q=0.
long count_dofs(const DgSpace& space);
long velocity_dof_count(long num_elements, int spatial_dim);
long pressure_dof_count(long num_elements);

// Affine geometry of one element: lambda_i(x) = coeff(i,0) + coeff.row(i).tail(D).dot(x).
struct ElementBasis {
  Eigen::MatrixXd coeff;  // (D+1) x (D+1)
  double measure = 0.0;

  Eigen::VectorXd barycentric(const Point& x, int dim) const {
    Eigen::VectorXd one_x(dim + 1);
    one_x(0) = 1.0;
    one_x.tail(dim) = x.head(dim);
    return coeff * one_x;
  }
  // Constant gradient of lambda_i: coeff.row(i).tail(D).
  Eigen::MatrixXd gradients(int dim) const { return coeff.rightCols(dim); }
};

std::vector<ElementBasis> build_element_bases(const SpaceTimeMesh& mesh);

}  // namespace stmesh

#endif
