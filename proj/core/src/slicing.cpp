#include "stmesh/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stmesh/geometry.hpp"

namespace stmesh {

Hyperplane Hyperplane::constant_time(double t_star, int dim) {
  Hyperplane plane;
  plane.p0 = Point::Zero();
  plane.p0[dim - 1] = t_star;
  for (int c = 0; c < dim - 1; ++c) {
    Point e = Point::Zero();
    e[c] = 1.0;
    plane.span.push_back(e);
  }
  return plane;
}

Point Hyperplane::unit_normal(int dim) const {
  if (static_cast<int>(span.size()) != dim - 1)
    throw Error("hyperplane needs dim-1 spanning vectors");
  Eigen::MatrixXd s(dim, dim - 1);
  double scale = 0.0;
  for (int j = 0; j < dim - 1; ++j) {
    s.col(j) = span[static_cast<std::size_t>(j)].head(dim);
    scale = std::max(scale, s.col(j).norm());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.transpose(), Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() <= 1e-12 * std::max(scale, 1e-300))
    throw Error("hyperplane spanning vectors are (numerically) linearly dependent");
  Point n = Point::Zero();
  n.head(dim) = svd.matrixV().col(dim - 1);
  return n;
}

std::optional<EdgeIntersection> edge_plane_intersection(const Point& x1, const Point& x2,
                                                        const Hyperplane& plane, int dim) {
  Eigen::MatrixXd a(dim, dim);
  for (int j = 0; j < dim - 1; ++j) a.col(j) = plane.span[static_cast<std::size_t>(j)].head(dim);
  a.col(dim - 1) = (x1 - x2).head(dim);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) return std::nullopt;  // edge parallel to the plane
  Eigen::VectorXd sol = lu.solve((x1 - plane.p0).head(dim));
  const double lambda = sol(dim - 1);
  if (lambda < 0.0 || lambda > 1.0) return std::nullopt;
  EdgeIntersection out;
  out.lambda = lambda;
  out.point = x1 + lambda * (x2 - x1);
  return out;
}

int vtk_cell_type(CellType type) {
  switch (type) {
    case CellType::Line: return 3;
    case CellType::Triangle: return 5;
    case CellType::Quad: return 9;
    case CellType::Tetra: return 10;
    case CellType::Wedge: return 13;
  }
  return 0;
}

int cell_type_points(CellType type) {
  switch (type) {
    case CellType::Line: return 2;
    case CellType::Triangle: return 3;
    case CellType::Quad: return 4;
    case CellType::Tetra: return 4;
    case CellType::Wedge: return 6;
  }
  return 0;
}

double SliceComplex::cell_measure(int cell) const {
  const SliceCell& c = cells[static_cast<std::size_t>(cell)];
  auto pt = [&](int i) { return points[static_cast<std::size_t>(c.points[static_cast<std::size_t>(i)])]; };
  auto simplex = [&](std::initializer_list<int> ids) {
    std::vector<Point> pts;
    for (int i : ids) pts.push_back(pt(i));
    return simplex_measure(pts, dim);
  };
  switch (c.type) {
    case CellType::Line: return simplex({0, 1});
    case CellType::Triangle: return simplex({0, 1, 2});
    case CellType::Quad: return simplex({0, 1, 2}) + simplex({0, 2, 3});
    case CellType::Tetra: return simplex({0, 1, 2, 3});
    case CellType::Wedge:
      // Staircase split of the (convex) prism.
      return simplex({0, 1, 2, 3}) + simplex({1, 2, 3, 4}) + simplex({2, 3, 4, 5});
  }
  return 0.0;
}

double SliceComplex::total_measure() const {
  double sum = 0.0;
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) sum += cell_measure(c);
  return sum;
}

namespace {

// Materializes section points; slice_mesh shares them across elements through
// node/edge identity so interface slices match exactly.
struct PointSink {
  std::function<int(NodeId)> on_vertex;
  // Crossing of edge (a, b), a < b by global id, at parameter lambda from a.
  std::function<int(NodeId, NodeId, double)> on_edge;
};

// Signed plane distances per element vertex, already snapped to exact zeros.
void section_element(const SpaceTimeMesh& mesh, int element, std::span<const double> s,
                     PointSink& sink, std::vector<SliceCell>& out) {
  const Simplex& el = mesh.elements[static_cast<std::size_t>(element)];
  const int nv = el.num_nodes();
  const int dim = mesh.dim;

  std::array<int, 5> pos{}, neg{}, zero{};
  int npos = 0, nneg = 0, nzero = 0;
  for (int i = 0; i < nv; ++i) {
    if (s[static_cast<std::size_t>(i)] > 0.0) {
      pos[static_cast<std::size_t>(npos++)] = i;
    } else if (s[static_cast<std::size_t>(i)] < 0.0) {
      neg[static_cast<std::size_t>(nneg++)] = i;
    } else {
      zero[static_cast<std::size_t>(nzero++)] = i;
    }
  }

  auto emit = [&](CellType type, std::initializer_list<int> ids) {
    SliceCell cell;
    cell.type = type;
    cell.source_element = element;
    int m = 0;
    for (int id : ids) cell.points[static_cast<std::size_t>(m++)] = id;
    out.push_back(cell);
  };
  auto vertex_point = [&](int local) { return sink.on_vertex(el[local]); };
  auto crossing = [&](int lp, int ln) {
    NodeId a = el[lp];
    NodeId b = el[ln];
    double sa = s[static_cast<std::size_t>(lp)];
    double sb = s[static_cast<std::size_t>(ln)];
    if (a > b) {
      std::swap(a, b);
      std::swap(sa, sb);
    }
    return sink.on_edge(a, b, sa / (sa - sb));
  };

  if (nzero == nv) return;  // degenerate element inside the plane
  if (nzero == dim) {
    // A whole facet lies in the plane; the owning elements each emit it and
    // the caller deduplicates.
    if (dim == 4)
      emit(CellType::Tetra, {vertex_point(zero[0]), vertex_point(zero[1]), vertex_point(zero[2]),
                             vertex_point(zero[3])});
    else if (dim == 3)
      emit(CellType::Triangle, {vertex_point(zero[0]), vertex_point(zero[1]), vertex_point(zero[2])});
    else
      emit(CellType::Line, {vertex_point(zero[0]), vertex_point(zero[1])});
    return;
  }
  if (npos == 0 || nneg == 0) return;  // touches the plane in < dim points

  if (dim == 2) {
    if (nzero == 1) {
      emit(CellType::Line, {vertex_point(zero[0]), crossing(pos[0], neg[0])});
    } else {
      emit(CellType::Line, {crossing(pos[0], neg[0]), crossing(pos[1 % npos], neg[1 % nneg])});
    }
    return;
  }

  if (dim == 3) {
    if (nzero == 2) {
      emit(CellType::Triangle,
           {vertex_point(zero[0]), vertex_point(zero[1]), crossing(pos[0], neg[0])});
    } else if (nzero == 1) {
      // The on-plane vertex plus the two crossings.
      if (npos == 2)
        emit(CellType::Triangle,
             {vertex_point(zero[0]), crossing(pos[0], neg[0]), crossing(pos[1], neg[0])});
      else
        emit(CellType::Triangle,
             {vertex_point(zero[0]), crossing(pos[0], neg[0]), crossing(pos[0], neg[1])});
    } else if (npos == 2 && nneg == 2) {
      // Quad ordered so consecutive corners share a source vertex.
      emit(CellType::Quad, {crossing(pos[0], neg[0]), crossing(pos[0], neg[1]),
                            crossing(pos[1], neg[1]), crossing(pos[1], neg[0])});
    } else {
      const bool one_pos = npos == 1;
      const int apex = one_pos ? pos[0] : neg[0];
      const auto& others = one_pos ? neg : pos;
      emit(CellType::Triangle,
           {crossing(one_pos ? apex : others[0], one_pos ? others[0] : apex),
            crossing(one_pos ? apex : others[1], one_pos ? others[1] : apex),
            crossing(one_pos ? apex : others[2], one_pos ? others[2] : apex)});
    }
    return;
  }

  // dim == 4 (pentatopes).
  if (nzero == 3) {
    emit(CellType::Tetra, {vertex_point(zero[0]), vertex_point(zero[1]), vertex_point(zero[2]),
                           crossing(pos[0], neg[0])});
    return;
  }
  if (nzero == 2) {
    // Patterns (2,2,1) and (1,2,2): two crossings.
    emit(CellType::Tetra,
         {vertex_point(zero[0]), vertex_point(zero[1]), crossing(pos[0], neg[0]),
          crossing(pos[npos - 1], neg[nneg - 1])});
    return;
  }
  if (nzero == 1) {
    if (npos == 1 || nneg == 1) {
      // (1,1,3) or (3,1,1): the on-plane vertex plus three crossings.
      const bool one_pos = npos == 1;
      const int apex = one_pos ? pos[0] : neg[0];
      const auto& others = one_pos ? neg : pos;
      emit(CellType::Tetra,
           {vertex_point(zero[0]),
            crossing(one_pos ? apex : others[0], one_pos ? others[0] : apex),
            crossing(one_pos ? apex : others[1], one_pos ? others[1] : apex),
            crossing(one_pos ? apex : others[2], one_pos ? others[2] : apex)});
    } else {
      // (2,1,2): pyramid over the quad section, emitted as a tetrahedron fan.
      const int v = vertex_point(zero[0]);
      const int q0 = crossing(pos[0], neg[0]);
      const int q1 = crossing(pos[0], neg[1]);
      const int q2 = crossing(pos[1], neg[1]);
      const int q3 = crossing(pos[1], neg[0]);
      emit(CellType::Tetra, {v, q0, q1, q2});
      emit(CellType::Tetra, {v, q0, q2, q3});
    }
    return;
  }
  // nzero == 0.
  if (npos == 1 || nneg == 1) {
    const bool one_pos = npos == 1;
    const int apex = one_pos ? pos[0] : neg[0];
    const auto& others = one_pos ? neg : pos;
    emit(CellType::Tetra, {crossing(one_pos ? apex : others[0], one_pos ? others[0] : apex),
                           crossing(one_pos ? apex : others[1], one_pos ? others[1] : apex),
                           crossing(one_pos ? apex : others[2], one_pos ? others[2] : apex),
                           crossing(one_pos ? apex : others[3], one_pos ? others[3] : apex)});
  } else {
    // (2,0,3) or (3,0,2): wedge, triangles matched by shared source vertices.
    const bool two_pos = npos == 2;
    const int a = two_pos ? pos[0] : neg[0];
    const int b = two_pos ? pos[1] : neg[1];
    const auto& others = two_pos ? neg : pos;
    auto x = [&](int pair_side, int other) {
      return two_pos ? crossing(pair_side, other) : crossing(other, pair_side);
    };
    emit(CellType::Wedge, {x(a, others[0]), x(a, others[1]), x(a, others[2]), x(b, others[0]),
                           x(b, others[1]), x(b, others[2])});
  }
}

}  // namespace

std::vector<SliceCell> slice_element(const SpaceTimeMesh& mesh, int element,
                                     const Hyperplane& plane, std::vector<Point>* cell_points) {
  const int dim = mesh.dim;
  const Point n = plane.unit_normal(dim);
  const Simplex& el = mesh.elements[static_cast<std::size_t>(element)];
  const double h = mesh.h.empty()
                       ? max_edge_length(mesh.element_points(element), dim)
                       : mesh.h[static_cast<std::size_t>(element)];
  const double snap = 1e-10 * h;

  std::array<double, 5> s{};
  for (int i = 0; i < el.num_nodes(); ++i) {
    const double v =
        n.head(dim).dot((mesh.coords[static_cast<std::size_t>(el[i])] - plane.p0).head(dim));
    s[static_cast<std::size_t>(i)] = std::abs(v) <= snap ? 0.0 : v;
  }

  std::vector<Point> points;
  PointSink sink;
  sink.on_vertex = [&](NodeId node) {
    points.push_back(mesh.coords[static_cast<std::size_t>(node)]);
    return static_cast<int>(points.size()) - 1;
  };
  sink.on_edge = [&](NodeId a, NodeId b, double lambda) {
    const Point& xa = mesh.coords[static_cast<std::size_t>(a)];
    const Point& xb = mesh.coords[static_cast<std::size_t>(b)];
    points.push_back(xa + lambda * (xb - xa));
    return static_cast<int>(points.size()) - 1;
  };

  std::vector<SliceCell> cells;
  section_element(mesh, element, std::span<const double>(s.data(), static_cast<std::size_t>(el.num_nodes())),
                  sink, cells);
  if (cell_points) *cell_points = std::move(points);
  return cells;
}

SliceComplex slice_mesh(const SpaceTimeMesh& mesh, const Hyperplane& plane,
                        const std::vector<NodalField>& fields) {
  const int dim = mesh.dim;
  const Point n = plane.unit_normal(dim);

  double h_max = 0.0;
  if (mesh.h.empty()) {
    for (int e = 0; e < mesh.num_elements(); ++e)
      h_max = std::max(h_max, max_edge_length(mesh.element_points(e), dim));
  } else {
    for (double h : mesh.h) h_max = std::max(h_max, h);
  }
  const double time_extent = std::abs(mesh.t_end - mesh.t_begin);
  const double snap = 1e-10 * (time_extent > 0.0 ? time_extent : std::max(h_max, 1e-30));

  // Global snapped signed distances keep the section consistent across
  // neighboring elements.
  std::vector<double> s(static_cast<std::size_t>(mesh.num_nodes()));
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const double v = n.head(dim).dot((mesh.coords[static_cast<std::size_t>(i)] - plane.p0).head(dim));
    s[static_cast<std::size_t>(i)] = std::abs(v) <= snap ? 0.0 : v;
  }

  SliceComplex complex;
  complex.dim = mesh.spatial_dim();
  for (const NodalField& f : fields) {
    NodalField out;
    out.name = f.name;
    out.components = f.components;
    complex.point_fields.push_back(std::move(out));
  }

  std::unordered_map<NodeId, int> vertex_points;
  std::unordered_map<std::uint64_t, int> edge_points;

  PointSink sink;
  sink.on_vertex = [&](NodeId node) {
    auto it = vertex_points.find(node);
    if (it != vertex_points.end()) return it->second;
    const int id = static_cast<int>(complex.points.size());
    complex.points.push_back(mesh.coords[static_cast<std::size_t>(node)]);
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const NodalField& src = fields[f];
      for (int c = 0; c < src.components; ++c)
        complex.point_fields[f].values.push_back(
            src.values[static_cast<std::size_t>(node) * static_cast<std::size_t>(src.components) +
                       static_cast<std::size_t>(c)]);
    }
    vertex_points.emplace(node, id);
    return id;
  };
  sink.on_edge = [&](NodeId a, NodeId b, double lambda) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
        static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
    auto it = edge_points.find(key);
    if (it != edge_points.end()) return it->second;
    const int id = static_cast<int>(complex.points.size());
    const Point& xa = mesh.coords[static_cast<std::size_t>(a)];
    const Point& xb = mesh.coords[static_cast<std::size_t>(b)];
    complex.points.push_back(xa + lambda * (xb - xa));
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const NodalField& src = fields[f];
      for (int c = 0; c < src.components; ++c) {
        const double va = src.values[static_cast<std::size_t>(a) * static_cast<std::size_t>(src.components) +
                                     static_cast<std::size_t>(c)];
        const double vb = src.values[static_cast<std::size_t>(b) * static_cast<std::size_t>(src.components) +
                                     static_cast<std::size_t>(c)];
        complex.point_fields[f].values.push_back((1.0 - lambda) * va + lambda * vb);
      }
    }
    edge_points.emplace(key, id);
    return id;
  };

  std::set<std::array<int, 6>> seen_cells;  // deduplicates facet-in-plane sections
  std::array<double, 5> local_s{};
  std::vector<SliceCell> cells;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Simplex& el = mesh.elements[static_cast<std::size_t>(e)];
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (int i = 0; i < el.num_nodes(); ++i) {
      const double v = s[static_cast<std::size_t>(el[i])];
      local_s[static_cast<std::size_t>(i)] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo > 0.0 || hi < 0.0) continue;

    cells.clear();
    section_element(mesh, e,
                    std::span<const double>(local_s.data(), static_cast<std::size_t>(el.num_nodes())),
                    sink, cells);
    for (const SliceCell& cell : cells) {
      std::array<int, 6> key{-1, -1, -1, -1, -1, -1};
      const int np = cell_type_points(cell.type);
      for (int i = 0; i < np; ++i) key[static_cast<std::size_t>(i)] = cell.points[static_cast<std::size_t>(i)];
      std::sort(key.begin(), key.begin() + np);
      if (seen_cells.insert(key).second) complex.cells.push_back(cell);
    }
  }
  return complex;
}

SliceComplex slice_mesh(const SpaceTimeMesh& mesh, double t_star,
                        const std::vector<NodalField>& fields) {
  const double lo = std::min(mesh.t_begin, mesh.t_end);
  const double hi = std::max(mesh.t_begin, mesh.t_end);
  const double tol = 1e-12 * std::max(hi - lo, 1.0);
  if (t_star < lo - tol || t_star > hi + tol) {
    std::ostringstream msg;
    msg << "slice time " << t_star << " outside [" << lo << ", " << hi << "]";
    throw Error(msg.str());
  }
  return slice_mesh(mesh, Hyperplane::constant_time(t_star, mesh.dim), fields);
}

}  // namespace stmesh
