#include "stmesh/dg_space.hpp"

#include "stmesh/geometry.hpp"

namespace stmesh {

long count_dofs(const DgSpace& space) {
  const long n = space.mesh->num_elements();
  return space.kind == DgSpaceKind::VelocityP1Vector
             ? velocity_dof_count(n, space.spatial_components())
             : pressure_dof_count(n);
}

long velocity_dof_count(long num_elements, int spatial_dim) {
  return num_elements * (spatial_dim + 2) * spatial_dim;
}

long pressure_dof_count(long num_elements) { return num_elements; }

std::vector<ElementBasis> build_element_bases(const SpaceTimeMesh& mesh) {
  const int dim = mesh.dim;
  std::vector<ElementBasis> bases(static_cast<std::size_t>(mesh.num_elements()));
  Eigen::MatrixXd a(dim + 1, dim + 1);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto pts = mesh.element_points(e);
    for (int j = 0; j <= dim; ++j) {
      a(0, j) = 1.0;
      a.col(j).tail(dim) = pts[static_cast<std::size_t>(j)].head(dim);
    }
    ElementBasis& basis = bases[static_cast<std::size_t>(e)];
    basis.coeff = a.partialPivLu().inverse().transpose();
    basis.measure = simplex_measure(pts, dim);
  }
  return bases;
}

}  // namespace stmesh
