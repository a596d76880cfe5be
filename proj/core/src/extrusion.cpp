#include "stmesh/extrusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stmesh/numbering.hpp"

namespace stmesh {

std::vector<Simplex> decompose_hyperprism(const Hyperprism& prism) {
  if (!(prism.tau > 0.0)) throw DegenerateElementError("hyperprism with non-positive height");
  const int d = static_cast<int>(prism.bottom.size()) - 1;
  std::vector<Simplex> out;
  out.reserve(static_cast<std::size_t>(d + 1));
  for (int i = 0; i <= d; ++i) {
    Simplex s;
    s.dim = static_cast<std::int8_t>(d + 1);
    int m = 0;
    for (int j = i; j <= d; ++j) s[m++] = prism.bottom[static_cast<std::size_t>(j)];
    for (int j = 0; j <= i; ++j) s[m++] = prism.top[static_cast<std::size_t>(j)];
    out.push_back(s);
  }
  return out;
}

namespace {

void append_slab_elements(const SpatialMesh& mesh, double tau, NodeId bottom_offset,
                          NodeId top_offset, std::vector<Simplex>& out) {
  Hyperprism prism;
  prism.tau = tau;
  const int d = mesh.dim;
  prism.bottom.resize(static_cast<std::size_t>(d + 1));
  prism.top.resize(static_cast<std::size_t>(d + 1));
  for (const Simplex& el : mesh.elements) {
    for (int i = 0; i <= d; ++i) {
      prism.bottom[static_cast<std::size_t>(i)] = bottom_offset + el[i];
      prism.top[static_cast<std::size_t>(i)] = top_offset + el[i];
    }
    auto simplices = decompose_hyperprism(prism);
    out.insert(out.end(), simplices.begin(), simplices.end());
  }
}

void check_no_degenerate(const SpaceTimeMesh& st, const ExtrudeOptions& options, int slab_index) {
  if (!options.check_degeneracy) return;
  for (int e = 0; e < st.num_elements(); ++e) {
    auto pts = st.element_points(e);
    const double h = max_edge_length(pts, st.dim);
    const double measure = simplex_measure(pts, st.dim);
    if (measure <= options.degeneracy_rel_tol * std::pow(h, st.dim)) {
      std::ostringstream msg;
      msg << "degenerate space-time element " << e;
      if (slab_index >= 0) msg << " in slab " << slab_index;
      msg << " (measure " << measure << ", h " << h << "); boundary motion too violent";
      throw DegenerateElementError(msg.str());
    }
  }
}

void require_consistent(const SpatialMesh& mesh) {
  ConsistencyReport rep = check_consistent(mesh);
  if (!rep.consistent) {
    std::ostringstream msg;
    msg << "spatial mesh is not consistently numbered (" << rep.violations.size()
        << " ordering violations";
    if (!rep.violations.empty())
      msg << ", first pair " << rep.violations.front().first << "/"
          << rep.violations.front().second;
    msg << "); run make_consistent first";
    throw ConsistencyError(msg.str());
  }
}

}  // namespace

SpaceTimeMesh extrude_slab(const SpatialMesh& mesh, const SlabSpec& slab,
                           const ExtrudeOptions& options) {
  if (!(slab.tau > 0.0)) throw DegenerateElementError("slab with non-positive height");
  if (options.check_consistency) require_consistent(mesh);

  const int n = mesh.num_nodes();
  const int d = mesh.dim;
  SpaceTimeMesh st;
  st.dim = d + 1;
  st.t_begin = slab.t_start;
  st.t_end = slab.t_start + slab.tau;
  st.nodes_per_level = n;
  st.level_times = {slab.t_start, slab.t_start + slab.tau};
  st.coords.resize(static_cast<std::size_t>(2 * n), Point::Zero());

  auto displaced = [&](int node, const std::vector<Point>& disp, double t) {
    Point p = mesh.coords[static_cast<std::size_t>(node)];
    if (!disp.empty()) p += disp[static_cast<std::size_t>(node)];
    p[d] = t;
    for (int c = d + 1; c < 4; ++c) p[c] = 0.0;
    return p;
  };
  for (int i = 0; i < n; ++i) {
    st.coords[static_cast<std::size_t>(i)] = displaced(i, slab.bottom_displacement, slab.t_start);
    st.coords[static_cast<std::size_t>(n + i)] =
        displaced(i, slab.top_displacement, slab.t_start + slab.tau);
  }
  append_slab_elements(mesh, slab.tau, 0, n, st.elements);
  check_no_degenerate(st, options, -1);
  compute_mesh_sizes(st);
  return st;
}

SpaceTimeMesh extrude_multi(const SpatialMesh& mesh, const std::vector<double>& time_partition,
                            const LevelDisplacements& displacements,
                            const ExtrudeOptions& options) {
  if (time_partition.size() < 2) throw Error("time partition needs at least two levels");
  for (std::size_t k = 1; k < time_partition.size(); ++k)
    if (!(time_partition[k] > time_partition[k - 1]))
      throw Error("time partition must be strictly increasing");
  if (!displacements.empty() && displacements.size() != time_partition.size())
    throw Error("one displacement field per time level required");
  if (options.check_consistency) require_consistent(mesh);

  const int n = mesh.num_nodes();
  const int d = mesh.dim;
  const int num_levels = static_cast<int>(time_partition.size());

  SpaceTimeMesh st;
  st.dim = d + 1;
  st.t_begin = time_partition.front();
  st.t_end = time_partition.back();
  st.nodes_per_level = n;
  st.level_times = time_partition;
  st.coords.resize(static_cast<std::size_t>(num_levels) * static_cast<std::size_t>(n),
                   Point::Zero());
  for (int level = 0; level < num_levels; ++level) {
    const double t = time_partition[static_cast<std::size_t>(level)];
    for (int i = 0; i < n; ++i) {
      Point p = mesh.coords[static_cast<std::size_t>(i)];
      if (!displacements.empty())
        p += displacements[static_cast<std::size_t>(level)][static_cast<std::size_t>(i)];
      p[d] = t;
      for (int c = d + 1; c < 4; ++c) p[c] = 0.0;
      st.coords[static_cast<std::size_t>(level) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(i)] = p;
    }
  }

  for (int k = 0; k + 1 < num_levels; ++k) {
    const double tau = time_partition[static_cast<std::size_t>(k + 1)] -
                       time_partition[static_cast<std::size_t>(k)];
    std::vector<Simplex> slab_elements;
    append_slab_elements(mesh, tau, k * n, (k + 1) * n, slab_elements);
    SpaceTimeMesh probe;
    probe.dim = st.dim;
    probe.coords = st.coords;
    probe.elements = slab_elements;
    check_no_degenerate(probe, options, k);
    st.elements.insert(st.elements.end(), slab_elements.begin(), slab_elements.end());
  }

  compute_mesh_sizes(st);
  extract_facets(st);
  classify_boundary(st, mesh);
  return st;
}

SpaceTimeMesh extrude_multi(const SpatialMesh& mesh, const std::vector<double>& time_partition,
                            const ExtrudeOptions& options) {
  return extrude_multi(mesh, time_partition, LevelDisplacements{}, options);
}

void classify_boundary(SpaceTimeMesh& stmesh, const SpatialMesh& spatial) {
  if (stmesh.nodes_per_level <= 0)
    throw Error("classify_boundary requires extrusion provenance (nodes_per_level)");
  const int n = stmesh.nodes_per_level;
  const int num_levels = static_cast<int>(stmesh.level_times.size());
  const double time_tol = 1e-10 * std::max(std::abs(stmesh.t_end - stmesh.t_begin), 1e-30);

  std::array<NodeId, kMaxDim> spatial_ids{};
  for (Facet& f : stmesh.boundary_facets) {
    const int nn = f.key.num_nodes();
    int min_level = num_levels;
    int max_level = -1;
    for (int i = 0; i < nn; ++i) {
      const NodeId id = f.key.nodes[static_cast<std::size_t>(i)];
      const int level = id / n;
      min_level = std::min(min_level, level);
      max_level = std::max(max_level, level);
    }

    if (min_level == max_level) {
      // Flat facet: a copy of a spatial element at one time level.
      const double t = stmesh.level_times[static_cast<std::size_t>(min_level)];
      if (min_level == 0 && std::abs(t - stmesh.t_begin) <= time_tol &&
          f.normal_time(stmesh.dim) < -0.5) {
        f.cls = BoundaryClass::Sigma0;
        continue;
      }
      if (min_level == num_levels - 1 && std::abs(t - stmesh.t_end) <= time_tol &&
          f.normal_time(stmesh.dim) > 0.5) {
        f.cls = BoundaryClass::SigmaT;
        continue;
      }
      std::ostringstream msg;
      msg << "flat boundary facet at interior time level " << min_level;
      throw AdmissibilityError(msg.str());
    }

    if (max_level - min_level == 1) {
      // Mantle facet: spans two levels over a spatial boundary facet.
      int m = 0;
      for (int i = 0; i < nn; ++i) {
        const NodeId sid = f.key.nodes[static_cast<std::size_t>(i)] % n;
        bool seen = false;
        for (int j = 0; j < m; ++j) seen = seen || spatial_ids[static_cast<std::size_t>(j)] == sid;
        if (!seen) spatial_ids[static_cast<std::size_t>(m++)] = sid;
      }
      if (m == stmesh.spatial_dim()) {
        FacetKey key(std::span<const NodeId>(spatial_ids.data(), static_cast<std::size_t>(m)));
        auto it = spatial.boundary_tags.find(key);
        if (it != spatial.boundary_tags.end()) {
          f.tag = it->second;
          f.cls = (it->second == SpatialTag::RobinIn || it->second == SpatialTag::RobinOut)
                      ? BoundaryClass::SigmaR
                      : BoundaryClass::SigmaD;
          continue;
        }
      }
    }
    std::ostringstream msg;
    msg << "unclassifiable boundary facet (nodes";
    for (int i = 0; i < nn; ++i) msg << ' ' << f.key.nodes[static_cast<std::size_t>(i)];
    msg << ")";
    throw AdmissibilityError(msg.str());
  }
}

}  // namespace stmesh
