#include "stmesh/builtin_meshes.hpp"

#include <algorithm>
#include <cmath>

#include "stmesh/extrusion.hpp"
#include "stmesh/numbering.hpp"

namespace stmesh {

void tag_boundary(SpatialMesh& mesh, const TagPredicate& classify) {
  mesh.boundary_tags.clear();
  for (const auto& [key, info] : spatial_facets(mesh)) {
    if (info.count != 1) continue;
    std::vector<Point> pts;
    for (int i = 0; i < key.num_nodes(); ++i)
      pts.push_back(mesh.coords[static_cast<std::size_t>(key.nodes[static_cast<std::size_t>(i)])]);
    mesh.boundary_tags[key] = classify(pts);
  }
}

namespace {

void tag_all_dirichlet(SpatialMesh& mesh) {
  tag_boundary(mesh, [](std::span<const Point>) { return SpatialTag::Dirichlet; });
}

}  // namespace

SpatialMesh interval_mesh(int n, double x0, double x1) {
  if (n < 1) throw Error("interval_mesh needs n >= 1");
  SpatialMesh mesh;
  mesh.dim = 1;
  for (int i = 0; i <= n; ++i)
    mesh.coords.push_back(make_point(x0 + (x1 - x0) * i / n));
  for (int i = 0; i < n; ++i) {
    Simplex el;
    el.dim = 1;
    el[0] = i;
    el[1] = i + 1;
    mesh.elements.push_back(el);
  }
  tag_all_dirichlet(mesh);
  return mesh;
}

SpatialMesh unit_square_mesh(int n) {
  if (n < 1) throw Error("unit_square_mesh needs n >= 1");
  SpatialMesh mesh;
  mesh.dim = 2;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.coords.push_back(make_point(static_cast<double>(i) / n, static_cast<double>(j) / n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Simplex a;
      a.dim = 2;
      a[0] = id(i, j);
      a[1] = id(i + 1, j);
      a[2] = id(i, j + 1);
      mesh.elements.push_back(a);
      Simplex b;
      b.dim = 2;
      b[0] = id(i + 1, j);
      b[1] = id(i + 1, j + 1);
      b[2] = id(i, j + 1);
      mesh.elements.push_back(b);
    }
  }
  mesh = make_consistent(std::move(mesh));
  tag_all_dirichlet(mesh);
  return mesh;
}

SpatialMesh unit_cube_mesh(int n) {
  if (n < 1) throw Error("unit_cube_mesh needs n >= 1");
  SpatialMesh mesh;
  mesh.dim = 3;
  auto id = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        mesh.coords.push_back(make_point(static_cast<double>(i) / n, static_cast<double>(j) / n,
                                         static_cast<double>(k) / n));
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& perm : perms) {
          int c[3] = {i, j, k};
          Simplex el;
          el.dim = 3;
          el[0] = id(c[0], c[1], c[2]);
          for (int step = 0; step < 3; ++step) {
            ++c[perm[step]];
            el[step + 1] = id(c[0], c[1], c[2]);
          }
          mesh.elements.push_back(el);
        }
      }
    }
  }
  mesh = make_consistent(std::move(mesh));
  tag_all_dirichlet(mesh);
  return mesh;
}

SpatialMesh disk_mesh(int n, double radius) {
  if (n < 1) throw Error("disk_mesh needs n >= 1");
  SpatialMesh mesh;
  mesh.dim = 2;
  auto id = [n](int i, int j) { return j * (2 * n + 1) + i; };
  // Square [-1,1]^2 mapped ring-by-ring onto the disk: p -> p max(|x|,|y|)/|p|.
  for (int j = -n; j <= n; ++j) {
    for (int i = -n; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      const double y = static_cast<double>(j) / n;
      const double len = std::hypot(x, y);
      const double ring = std::max(std::abs(x), std::abs(y));
      if (len == 0.0) {
        mesh.coords.push_back(make_point(0.0, 0.0));
      } else {
        mesh.coords.push_back(make_point(radius * x * ring / len, radius * y * ring / len));
      }
    }
  }
  for (int j = 0; j < 2 * n; ++j) {
    for (int i = 0; i < 2 * n; ++i) {
      // Split each quad towards the center so ring boundaries stay element
      // edges under the mapping.
      const bool flip = (i < n) == (j < n);
      Simplex a, b;
      a.dim = b.dim = 2;
      if (flip) {
        a[0] = id(i, j);
        a[1] = id(i + 1, j);
        a[2] = id(i + 1, j + 1);
        b[0] = id(i, j);
        b[1] = id(i + 1, j + 1);
        b[2] = id(i, j + 1);
      } else {
        a[0] = id(i, j);
        a[1] = id(i + 1, j);
        a[2] = id(i, j + 1);
        b[0] = id(i + 1, j);
        b[1] = id(i + 1, j + 1);
        b[2] = id(i, j + 1);
      }
      mesh.elements.push_back(a);
      mesh.elements.push_back(b);
    }
  }
  mesh = make_consistent(std::move(mesh));
  tag_all_dirichlet(mesh);
  return mesh;
}

SpatialMesh cylinder_mesh(int n_xy, int n_z, double radius, double z0, double z1) {
  SpatialMesh disk = disk_mesh(n_xy, radius);
  std::vector<double> levels;
  for (int k = 0; k <= n_z; ++k) levels.push_back(z0 + (z1 - z0) * k / n_z);
  // The admissible slab decomposition works for any extrusion axis; here the
  // "time" axis is z.
  SpaceTimeMesh extruded = extrude_multi(disk, levels);
  SpatialMesh mesh;
  mesh.dim = 3;
  mesh.coords = std::move(extruded.coords);
  mesh.elements = std::move(extruded.elements);
  tag_all_dirichlet(mesh);
  return mesh;
}

SpatialMesh pump_mesh(int n_xy, int n_z, double* membrane_radius) {
  const double radius = 0.8;
  const double z0 = -0.4, z1 = 0.4;
  SpatialMesh mesh = cylinder_mesh(n_xy, n_z, radius, z0, z1);
  // Largest node ring strictly inside the rim carries the membrane.
  const double ring = radius * (n_xy - 1) / n_xy;
  if (membrane_radius) *membrane_radius = ring;
  const double eps = 1e-9;
  tag_boundary(mesh, [&](std::span<const Point> pts) {
    bool top = true, side = true, membrane = true;
    double cx = 0.0, cz = 0.0;
    for (const Point& p : pts) {
      const double r = std::hypot(p[0], p[1]);
      top = top && std::abs(p[2] - z1) <= eps;
      side = side && r >= radius - 1e-7;
      membrane = membrane && r <= ring + 1e-7;
      cx += p[0];
      cz += p[2];
    }
    cx /= static_cast<double>(pts.size());
    cz /= static_cast<double>(pts.size());
    if (top && membrane) return SpatialTag::DirichletMoving;
    if (side && std::abs(cz) < 0.5 * (z1 - z0) / n_z + eps) {
      if (cx > 0.6 * radius) return SpatialTag::RobinIn;
      if (cx < -0.6 * radius) return SpatialTag::RobinOut;
    }
    return SpatialTag::Dirichlet;
  });
  return mesh;
}

SpatialMesh pipe_mesh(int n_xy, int n_z) {
  const double radius = 3.0;
  const double z0 = -10.0, z1 = 7.0;
  SpatialMesh mesh = cylinder_mesh(n_xy, n_z, radius, z0, z1);
  const double eps = 1e-9;
  tag_boundary(mesh, [&](std::span<const Point> pts) {
    bool bottom = true, top = true, side = true, lower = true;
    double cx = 0.0;
    for (const Point& p : pts) {
      bottom = bottom && std::abs(p[2] - z0) <= eps;
      top = top && std::abs(p[2] - z1) <= eps;
      side = side && std::hypot(p[0], p[1]) >= radius - 1e-7;
      lower = lower && p[2] <= -3.0 + eps;
      cx += p[0];
    }
    cx /= static_cast<double>(pts.size());
    if (bottom) return SpatialTag::DirichletMoving;
    if (side && lower) return SpatialTag::DirichletMoving;
    if (top) return cx < 0.0 ? SpatialTag::RobinIn : SpatialTag::RobinOut;
    return SpatialTag::Dirichlet;
  });
  return mesh;
}

}  // namespace stmesh
