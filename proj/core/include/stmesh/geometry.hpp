#ifndef STMESH_GEOMETRY_HPP
#define STMESH_GEOMETRY_HPP

#include <optional>
#include <span>
#include <vector>

#include "stmesh/types.hpp"

namespace stmesh {

// n-dimensional measure of the simplex spanned by pts (n+1 points embedded in
// R^ambient_dim, ambient_dim >= n): sqrt(det(E^T E)) / n! with E the edge
// matrix. Degenerate simplices return 0.
double simplex_measure(std::span<const Point> pts, int ambient_dim);

Point centroid(std::span<const Point> pts);

// Unit normal of the (dim-1)-simplex spanned by facet_pts in R^dim, oriented
// away from `inside` (typically the owning element's centroid). Throws
// DegenerateElementError for zero-measure facets.
Point facet_unit_normal(std::span<const Point> facet_pts, const Point& inside, int dim);

// Barycentric coordinates of x with respect to a full-dimensional simplex in
// R^dim given by verts (dim+1 points). Returns dim+1 coefficients.
Eigen::VectorXd barycentric_coordinates(std::span<const Point> verts, const Point& x, int dim);

bool point_in_simplex(std::span<const Point> verts, const Point& x, int dim, double tol);

// Euclidean distance from x to the closed simplex conv(verts) (any number of
// vertices 1..5, embedded in R^ambient_dim). Exact active-set enumeration.
double distance_to_convex_hull(std::span<const Point> verts, const Point& x, int ambient_dim);

// Closest points between two closed segments; returns the mid-point of the
// closest-approach pair and the distance.
struct SegmentProximity {
  double distance;
  Point point;
};
SegmentProximity segment_segment_proximity(const Point& a0, const Point& a1, const Point& b0,
                                           const Point& b1, int ambient_dim);

// Intersection of a segment with the relative interior-or-boundary of a
// k-simplex (k = simplex_pts.size()-1) when the joint parametrisation is
// non-degenerate. Returns nothing for (numerically) parallel configurations.
std::optional<Point> segment_simplex_intersection(const Point& s0, const Point& s1,
                                                  std::span<const Point> simplex_pts,
                                                  int ambient_dim, double tol);

// Isolated intersection of two triangles in R^4 (generic position). Returns
// nothing when the 4x4 parameter system is singular.
std::optional<Point> triangle_triangle_intersection_4d(std::span<const Point> tri_a,
                                                       std::span<const Point> tri_b, double tol);

// Axis-aligned bounding box.
struct Box {
  Point lo = Point::Constant(std::numeric_limits<double>::max());
  Point hi = Point::Constant(std::numeric_limits<double>::lowest());
  void absorb(const Point& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  bool overlaps(const Box& other, double tol) const {
    return (lo.array() - tol <= other.hi.array()).all() &&
           (other.lo.array() - tol <= hi.array()).all();
  }
};

Box bounding_box(std::span<const Point> pts);

}  // namespace stmesh

#endif
