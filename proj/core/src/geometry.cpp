#include "stmesh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stmesh {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Edge matrix with columns p_i - p_0, restricted to the ambient dimension.
Eigen::MatrixXd edge_matrix(std::span<const Point> pts, int ambient_dim) {
  const int n = static_cast<int>(pts.size()) - 1;
  Eigen::MatrixXd e(ambient_dim, n);
  for (int j = 0; j < n; ++j)
    e.col(j) = (pts[static_cast<std::size_t>(j + 1)] - pts[0]).head(ambient_dim);
  return e;
}

}  // namespace

double simplex_measure(std::span<const Point> pts, int ambient_dim) {
  const int n = static_cast<int>(pts.size()) - 1;
  if (n == 0) return 1.0;  // counting measure of a vertex
  Eigen::MatrixXd e = edge_matrix(pts, ambient_dim);
  if (ambient_dim == n) {
    return std::abs(e.determinant()) / factorial(n);
  }
  const double g = (e.transpose() * e).determinant();
  return g <= 0.0 ? 0.0 : std::sqrt(g) / factorial(n);
}

Point centroid(std::span<const Point> pts) {
  Point c = Point::Zero();
  for (const Point& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

Point facet_unit_normal(std::span<const Point> facet_pts, const Point& inside, int dim) {
  Point n = Point::Zero();
  if (dim == 1) {
    // A facet of a 1-simplex is a single point.
    n[0] = 1.0;
  } else {
    // Generalized cross product of the dim-1 edge vectors: cofactor expansion
    // of det([e_1 ... e_{dim-1} | x]) along the last column.
    Eigen::MatrixXd e = edge_matrix(facet_pts, dim);
    Eigen::MatrixXd minor(dim - 1, dim - 1);
    double sign = (dim % 2 == 0) ? -1.0 : 1.0;
    for (int i = 0; i < dim; ++i) {
      int r = 0;
      for (int row = 0; row < dim; ++row) {
        if (row == i) continue;
        minor.row(r++) = e.row(row);
      }
      n[i] = sign * minor.determinant();
      sign = -sign;
    }
  }
  const double len = n.norm();
  if (!(len > 0.0)) throw DegenerateElementError("facet has zero measure, no normal defined");
  n /= len;
  if (n.dot(centroid(facet_pts) - inside) < 0.0) n = -n;
  return n;
}

Eigen::VectorXd barycentric_coordinates(std::span<const Point> verts, const Point& x, int dim) {
  Eigen::MatrixXd a(dim + 1, dim + 1);
  Eigen::VectorXd rhs(dim + 1);
  for (int j = 0; j < dim + 1; ++j) {
    a(0, j) = 1.0;
    a.col(j).tail(dim) = verts[static_cast<std::size_t>(j)].head(dim);
  }
  rhs(0) = 1.0;
  rhs.tail(dim) = x.head(dim);
  return a.partialPivLu().solve(rhs);
}

bool point_in_simplex(std::span<const Point> verts, const Point& x, int dim, double tol) {
  Eigen::VectorXd lambda = barycentric_coordinates(verts, x, dim);
  return (lambda.array() >= -tol).all();
}

double distance_to_convex_hull(std::span<const Point> verts, const Point& x, int ambient_dim) {
  const int m = static_cast<int>(verts.size());
  double best = std::numeric_limits<double>::max();
  // Enumerate vertex subsets; project onto each affine hull and keep feasible
  // (all-nonnegative barycentric) candidates. Exact for m <= 5.
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int k = static_cast<int>(idx.size());
    Eigen::VectorXd lambda(k);
    if (k == 1) {
      lambda(0) = 1.0;
    } else {
      // Minimize ||V lambda - x|| with sum(lambda) = 1 via the edge basis.
      Eigen::MatrixXd e(ambient_dim, k - 1);
      for (int j = 1; j < k; ++j)
        e.col(j - 1) =
            (verts[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] -
             verts[static_cast<std::size_t>(idx[0])])
                .head(ambient_dim);
      Eigen::VectorXd rhs = (x - verts[static_cast<std::size_t>(idx[0])]).head(ambient_dim);
      Eigen::VectorXd mu =
          (e.transpose() * e).ldlt().solve(e.transpose() * rhs);
      if (!mu.allFinite()) continue;
      lambda.resize(k);
      lambda(0) = 1.0 - mu.sum();
      lambda.tail(k - 1) = mu;
      if ((lambda.array() < -1e-12).any()) continue;
    }
    Point proj = Point::Zero();
    for (int j = 0; j < k; ++j)
      proj += lambda(j) * verts[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    best = std::min(best, (proj - x).head(ambient_dim).norm());
  }
  return best;
}

SegmentProximity segment_segment_proximity(const Point& a0, const Point& a1, const Point& b0,
                                           const Point& b1, int ambient_dim) {
  const Eigen::VectorXd u = (a1 - a0).head(ambient_dim);
  const Eigen::VectorXd v = (b1 - b0).head(ambient_dim);
  const Eigen::VectorXd w = (a0 - b0).head(ambient_dim);
  const double uu = u.dot(u), uv = u.dot(v), vv = v.dot(v), uw = u.dot(w), vw = v.dot(w);
  double s = 0.0, t = 0.0;
  const double det = uu * vv - uv * uv;
  if (det > 1e-14 * std::max(uu * vv, 1e-300)) {
    s = (uv * vw - vv * uw) / det;
    t = (uu * vw - uv * uw) / det;
  } else if (uu > 0.0) {
    // Near-parallel: fix t = 0 and project.
    s = -uw / uu;
  }
  s = std::clamp(s, 0.0, 1.0);
  // Re-project t for the clamped s, then s again (standard two-pass clamp).
  if (vv > 0.0) t = std::clamp((vw + s * uv) / vv, 0.0, 1.0);
  if (uu > 0.0) s = std::clamp((t * uv - uw) / uu, 0.0, 1.0);
  Point pa = a0 + s * (a1 - a0);
  Point pb = b0 + t * (b1 - b0);
  return SegmentProximity{(pa - pb).head(ambient_dim).norm(), 0.5 * (pa + pb)};
}

std::optional<Point> segment_simplex_intersection(const Point& s0, const Point& s1,
                                                  std::span<const Point> simplex_pts,
                                                  int ambient_dim, double tol) {
  const int k = static_cast<int>(simplex_pts.size()) - 1;
  // Unknowns: segment parameter and k barycentric edge weights.
  Eigen::MatrixXd a(ambient_dim, k + 1);
  a.col(0) = (s1 - s0).head(ambient_dim);
  for (int j = 0; j < k; ++j)
    a.col(j + 1) = -(simplex_pts[static_cast<std::size_t>(j + 1)] - simplex_pts[0]).head(ambient_dim);
  Eigen::VectorXd rhs = (simplex_pts[0] - s0).head(ambient_dim);

  Eigen::VectorXd sol;
  if (ambient_dim == k + 1) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(tol);
    if (!lu.isInvertible()) return std::nullopt;
    sol = lu.solve(rhs);
  } else {
    // Over-determined: least squares plus residual test.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.rank() < k + 1) return std::nullopt;
    sol = svd.solve(rhs);
    if ((a * sol - rhs).norm() > tol) return std::nullopt;
  }
  const double lam = sol(0);
  if (lam < -tol || lam > 1.0 + tol) return std::nullopt;
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    if (sol(j + 1) < -tol) return std::nullopt;
    sum += sol(j + 1);
  }
  if (sum > 1.0 + tol) return std::nullopt;
  return s0 + lam * (s1 - s0);
}

std::optional<Point> triangle_triangle_intersection_4d(std::span<const Point> tri_a,
                                                       std::span<const Point> tri_b, double tol) {
  Eigen::Matrix4d a;
  a.col(0) = (tri_a[1] - tri_a[0]);
  a.col(1) = (tri_a[2] - tri_a[0]);
  a.col(2) = -(tri_b[1] - tri_b[0]);
  a.col(3) = -(tri_b[2] - tri_b[0]);
  Eigen::Vector4d rhs = tri_b[0] - tri_a[0];
  Eigen::FullPivLU<Eigen::Matrix4d> lu(a);
  lu.setThreshold(tol);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::Vector4d sol = lu.solve(rhs);
  const double ua = sol(0), va = sol(1), ub = sol(2), vb = sol(3);
  if (ua < -tol || va < -tol || ua + va > 1.0 + tol) return std::nullopt;
  if (ub < -tol || vb < -tol || ub + vb > 1.0 + tol) return std::nullopt;
  return tri_a[0] + ua * (tri_a[1] - tri_a[0]) + va * (tri_a[2] - tri_a[0]);
}

Box bounding_box(std::span<const Point> pts) {
  Box box;
  for (const Point& p : pts) box.absorb(p);
  return box;
}

}  // namespace stmesh
