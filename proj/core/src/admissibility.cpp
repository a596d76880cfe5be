#include "stmesh/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "stmesh/numbering.hpp"

namespace stmesh {

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<int, int>& p) const {
    return static_cast<std::size_t>(p.first) * 0x9e3779b97f4a7c15ull +
           static_cast<std::size_t>(p.second);
  }
};

std::vector<NodeId> shared_nodes(const Simplex& a, const Simplex& b) {
  std::vector<NodeId> s;
  for (NodeId n : a.node_span())
    for (NodeId m : b.node_span())
      if (n == m) {
        s.push_back(n);
        break;
      }
  return s;
}

// Tries to certify conv(A) ∩ conv(B) == conv(S) by a hyperplane through S
// with the remaining vertices of A and B strictly on opposite sides. The
// candidate normal is the difference of the non-shared centroids projected
// onto the orthogonal complement of S's edge span.
bool separating_certificate(std::span<const Point> a_pts, std::span<const Point> b_pts,
                            std::span<const Point> s_pts, int dim, double tol) {
  std::vector<Point> a_rest, b_rest;
  auto is_shared = [&](const Point& p, std::span<const Point> shared) {
    for (const Point& s : shared)
      if ((p - s).head(dim).norm() <= tol) return true;
    return false;
  };
  for (const Point& p : a_pts)
    if (!is_shared(p, s_pts)) a_rest.push_back(p);
  for (const Point& p : b_pts)
    if (!is_shared(p, s_pts)) b_rest.push_back(p);
  if (a_rest.empty() || b_rest.empty()) return false;

  Eigen::VectorXd w = (centroid(a_rest) - centroid(b_rest)).head(dim);

  if (!s_pts.empty() && s_pts.size() > 1) {
    // Project out the affine directions of S (Gram-Schmidt on the edge set).
    std::vector<Eigen::VectorXd> basis;
    for (std::size_t i = 1; i < s_pts.size(); ++i) {
      Eigen::VectorXd e = (s_pts[i] - s_pts[0]).head(dim);
      for (const auto& q : basis) e -= q.dot(e) * q;
      const double len = e.norm();
      if (len > 1e-14) basis.push_back(e / len);
    }
    for (const auto& q : basis) w -= q.dot(w) * q;
  }
  const double wlen = w.norm();
  if (wlen <= 1e-14) return false;
  w /= wlen;

  const double c = s_pts.empty()
                       ? 0.5 * (w.dot(centroid(a_rest).head(dim)) + w.dot(centroid(b_rest).head(dim)))
                       : w.dot(s_pts[0].head(dim));
  for (const Point& p : a_rest)
    if (w.dot(p.head(dim)) - c < tol) return false;
  for (const Point& p : b_rest)
    if (w.dot(p.head(dim)) - c > -tol) return false;
  return true;
}

void enumerate_faces(int nverts, int face_dim, std::vector<std::array<int, 4>>& out) {
  out.clear();
  std::array<int, 4> idx{};
  const int k = face_dim + 1;
  std::vector<int> comb(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
  while (true) {
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = comb[static_cast<std::size_t>(i)];
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == nverts - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Collects candidate points of conv(A) ∩ conv(B): vertices of one inside the
// other, edge-edge closest approaches, and edge-face crossings.
void collect_witnesses(std::span<const Point> a_pts, std::span<const Point> b_pts, int dim,
                       double tol, std::vector<Point>& out) {
  for (const Point& v : a_pts)
    if (distance_to_convex_hull(b_pts, v, dim) <= tol) out.push_back(v);
  for (const Point& v : b_pts)
    if (distance_to_convex_hull(a_pts, v, dim) <= tol) out.push_back(v);

  std::vector<std::array<int, 4>> edges_a, edges_b, faces;
  enumerate_faces(static_cast<int>(a_pts.size()), 1, edges_a);
  enumerate_faces(static_cast<int>(b_pts.size()), 1, edges_b);

  for (const auto& ea : edges_a) {
    for (const auto& eb : edges_b) {
      auto prox = segment_segment_proximity(a_pts[static_cast<std::size_t>(ea[0])],
                                            a_pts[static_cast<std::size_t>(ea[1])],
                                            b_pts[static_cast<std::size_t>(eb[0])],
                                            b_pts[static_cast<std::size_t>(eb[1])], dim);
      if (prox.distance <= tol) out.push_back(prox.point);
    }
  }

  auto edge_vs_faces = [&](std::span<const Point> seg_owner,
                           const std::vector<std::array<int, 4>>& seg_list,
                           std::span<const Point> face_owner, int face_dim) {
    std::vector<std::array<int, 4>> face_list;
    enumerate_faces(static_cast<int>(face_owner.size()), face_dim, face_list);
    std::vector<Point> fpts(static_cast<std::size_t>(face_dim + 1));
    for (const auto& seg : seg_list) {
      for (const auto& f : face_list) {
        for (int i = 0; i <= face_dim; ++i)
          fpts[static_cast<std::size_t>(i)] = face_owner[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])];
        auto hit = segment_simplex_intersection(seg_owner[static_cast<std::size_t>(seg[0])],
                                                seg_owner[static_cast<std::size_t>(seg[1])], fpts,
                                                dim, tol);
        if (hit) out.push_back(*hit);
      }
    }
  };

  for (int face_dim = 2; face_dim < dim; ++face_dim) {
    edge_vs_faces(a_pts, edges_a, b_pts, face_dim);
    edge_vs_faces(b_pts, edges_b, a_pts, face_dim);
  }

  if (dim == 4) {
    std::vector<std::array<int, 4>> tris_a, tris_b;
    enumerate_faces(static_cast<int>(a_pts.size()), 2, tris_a);
    enumerate_faces(static_cast<int>(b_pts.size()), 2, tris_b);
    std::vector<Point> ta(3), tb(3);
    for (const auto& fa : tris_a) {
      for (int i = 0; i < 3; ++i) ta[static_cast<std::size_t>(i)] = a_pts[static_cast<std::size_t>(fa[static_cast<std::size_t>(i)])];
      for (const auto& fb : tris_b) {
        for (int i = 0; i < 3; ++i) tb[static_cast<std::size_t>(i)] = b_pts[static_cast<std::size_t>(fb[static_cast<std::size_t>(i)])];
        auto hit = triangle_triangle_intersection_4d(ta, tb, tol);
        if (hit) out.push_back(*hit);
      }
    }
  }
}

}  // namespace

AdmissibilityReport check_admissible_raw(int dim, const std::vector<Point>& coords,
                                         const std::vector<Simplex>& elements) {
  AdmissibilityReport report;
  const int ne = static_cast<int>(elements.size());
  if (ne == 0) return report;

  Box domain = bounding_box(coords);
  const double diam = (domain.hi - domain.lo).head(dim).norm();
  const double tol = 1e-10 * std::max(diam, 1e-30);

  std::vector<std::vector<Point>> pts(static_cast<std::size_t>(ne));
  std::vector<Box> boxes(static_cast<std::size_t>(ne));
  std::vector<bool> degenerate(static_cast<std::size_t>(ne), false);
  for (int e = 0; e < ne; ++e) {
    pts[static_cast<std::size_t>(e)] =
        gather_points(coords, elements[static_cast<std::size_t>(e)].node_span());
    boxes[static_cast<std::size_t>(e)] = bounding_box(pts[static_cast<std::size_t>(e)]);
    const double h = max_edge_length(pts[static_cast<std::size_t>(e)], dim);
    const double measure = simplex_measure(pts[static_cast<std::size_t>(e)], dim);
    if (measure <= 1e-12 * std::pow(std::max(h, 1e-30), dim)) {
      degenerate[static_cast<std::size_t>(e)] = true;
      report.degenerate_elements.push_back(e);
    }
  }

  // Candidate pairs: every pair sharing a node, plus bounding-box overlaps
  // from a uniform grid (catches contacts without shared nodes).
  std::unordered_set<std::pair<int, int>, PairHash> candidates;
  auto incident = node_to_elements(static_cast<int>(coords.size()), elements);
  for (const auto& els : incident)
    for (std::size_t i = 0; i < els.size(); ++i)
      for (std::size_t j = i + 1; j < els.size(); ++j)
        candidates.insert({std::min(els[i], els[j]), std::max(els[i], els[j])});

  double cell = 0.0;
  for (int e = 0; e < ne; ++e)
    cell = std::max(cell, (boxes[static_cast<std::size_t>(e)].hi -
                           boxes[static_cast<std::size_t>(e)].lo)
                              .head(dim)
                              .maxCoeff());
  if (cell <= 0.0) cell = std::max(diam, 1.0);

  std::unordered_map<std::size_t, std::vector<int>> grid;
  auto cell_hash = [&](const std::array<long, 4>& c) {
    std::size_t h = 14695981039346656037ull;
    for (int i = 0; i < dim; ++i) {
      h ^= static_cast<std::size_t>(c[static_cast<std::size_t>(i)]);
      h *= 1099511628211ull;
    }
    return h;
  };
  std::array<long, 4> lo{}, hi{}, cur{};
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i < dim; ++i) {
      lo[static_cast<std::size_t>(i)] =
          static_cast<long>(std::floor((boxes[static_cast<std::size_t>(e)].lo[i] - tol) / cell));
      hi[static_cast<std::size_t>(i)] =
          static_cast<long>(std::floor((boxes[static_cast<std::size_t>(e)].hi[i] + tol) / cell));
    }
    cur = lo;
    while (true) {
      grid[cell_hash(cur)].push_back(e);
      int axis = 0;
      while (axis < dim) {
        if (++cur[static_cast<std::size_t>(axis)] <= hi[static_cast<std::size_t>(axis)]) break;
        cur[static_cast<std::size_t>(axis)] = lo[static_cast<std::size_t>(axis)];
        ++axis;
      }
      if (axis == dim) break;
    }
  }
  for (const auto& [key, els] : grid) {
    (void)key;
    for (std::size_t i = 0; i < els.size(); ++i)
      for (std::size_t j = i + 1; j < els.size(); ++j) {
        const int a = std::min(els[i], els[j]);
        const int b = std::max(els[i], els[j]);
        if (boxes[static_cast<std::size_t>(a)].overlaps(boxes[static_cast<std::size_t>(b)], tol))
          candidates.insert({a, b});
      }
  }

  std::vector<std::pair<int, int>> ordered(candidates.begin(), candidates.end());
  std::sort(ordered.begin(), ordered.end());

  std::vector<Point> s_pts;
  std::vector<Point> witnesses;
  for (const auto& [a, b] : ordered) {
    if (degenerate[static_cast<std::size_t>(a)] || degenerate[static_cast<std::size_t>(b)])
      continue;
    const Simplex& ea = elements[static_cast<std::size_t>(a)];
    const Simplex& eb = elements[static_cast<std::size_t>(b)];
    std::vector<NodeId> shared = shared_nodes(ea, eb);

    if (shared.size() == static_cast<std::size_t>(dim + 1)) {
      AdmissibilityViolation v;
      v.elem_a = a;
      v.elem_b = b;
      v.witness = centroid(pts[static_cast<std::size_t>(a)]);
      v.what = "duplicate element (full node overlap)";
      report.violations.push_back(std::move(v));
      continue;
    }

    s_pts.clear();
    for (NodeId n : shared) s_pts.push_back(coords[static_cast<std::size_t>(n)]);

    if (separating_certificate(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)],
                               s_pts, dim, tol))
      continue;

    witnesses.clear();
    collect_witnesses(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)], dim, tol,
                      witnesses);
    for (const Point& w : witnesses) {
      const double dist = s_pts.empty() ? std::numeric_limits<double>::max()
                                        : distance_to_convex_hull(s_pts, w, dim);
      if (dist > 10.0 * tol) {
        AdmissibilityViolation v;
        v.elem_a = a;
        v.elem_b = b;
        v.witness = w;
        std::ostringstream msg;
        msg << "intersection point outside shared subsimplex (distance " << dist << ")";
        v.what = msg.str();
        report.violations.push_back(std::move(v));
        break;
      }
    }
  }
  return report;
}

AdmissibilityReport check_admissible(const SpatialMesh& mesh) {
  return check_admissible_raw(mesh.dim, mesh.coords, mesh.elements);
}

AdmissibilityReport check_admissible(const SpaceTimeMesh& mesh) {
  return check_admissible_raw(mesh.dim, mesh.coords, mesh.elements);
}

}  // namespace stmesh
