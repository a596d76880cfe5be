#ifndef STMESH_SLICING_HPP
#define STMESH_SLICING_HPP

#include <optional>
#include <string>
#include <vector>

#include "stmesh/mesh.hpp"

namespace stmesh {

// Affine hyperplane p0 + span(p1, ..., p_{dim-1}) in R^dim.
struct Hyperplane {
  Point p0 = Point::Zero();
  std::vector<Point> span;

  static Hyperplane constant_time(double t_star, int dim);

  // Unit normal of the span; throws Error when the spanning vectors are not
  // linearly independent (rank check at tolerance 1e-12 x scale).
  Point unit_normal(int dim) const;
};

// Solves the (dim x dim) system (p1 ... p_{dim-1}, x1-x2) (mu, lambda)^T = x1 - p0.
// Returns the edge parameter and intersection point iff the matrix is
// invertible and lambda lies in [0,1]; nothing for parallel edges.
struct EdgeIntersection {
  double lambda = 0.0;
  Point point = Point::Zero();
};
std::optional<EdgeIntersection> edge_plane_intersection(const Point& x1, const Point& x2,
                                                        const Hyperplane& plane, int dim);

enum class CellType { Line, Triangle, Quad, Tetra, Wedge };
int vtk_cell_type(CellType type);
int cell_type_points(CellType type);

struct SliceCell {
  CellType type = CellType::Tetra;
  std::array<int, 6> points{};
  int source_element = -1;
};

// Named nodal field on the space-time mesh, linearly interpolated onto the
// slice. values has num_nodes * components entries.
struct NodalField {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

struct SliceComplex {
  int dim = 0;  // dimension of the slice (spatial dimension of the mesh)
  std::vector<Point> points;
  std::vector<SliceCell> cells;
  std::vector<NodalField> point_fields;  // same layout, per slice point

  double cell_measure(int cell) const;
  double total_measure() const;
};

// Intersection of one element with the plane: empty, one simplex cell, one
// wedge, or a tetrahedron fan for sections through a snapped vertex.
// Vertices within 1e-10 * h_k of the plane are treated as on-plane.
std::vector<SliceCell> slice_element(const SpaceTimeMesh& mesh, int element,
                                     const Hyperplane& plane,
                                     std::vector<Point>* cell_points = nullptr);

// Slices the whole mesh at time t_star (throws Error outside [t_begin, t_end])
// and interpolates the given nodal fields. Intersection points are shared
// between elements via edge identity, facet-in-plane sections are emitted
// exactly once.
SliceComplex slice_mesh(const SpaceTimeMesh& mesh, double t_star,
                        const std::vector<NodalField>& fields = {});

// Same, for an arbitrary hyperplane (no time-range check).
SliceComplex slice_mesh(const SpaceTimeMesh& mesh, const Hyperplane& plane,
                        const std::vector<NodalField>& fields = {});

}  // namespace stmesh

#endif
