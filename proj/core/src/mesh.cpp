#include "stmesh/mesh.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace stmesh {

const char* to_string(SpatialTag tag) {
  switch (tag) {
    case SpatialTag::Dirichlet: return "dirichlet";
    case SpatialTag::DirichletMoving: return "dirichlet_moving";
    case SpatialTag::RobinIn: return "robin_in";
    case SpatialTag::RobinOut: return "robin_out";
  }
  return "?";
}

const char* to_string(BoundaryClass cls) {
  switch (cls) {
    case BoundaryClass::None: return "interior";
    case BoundaryClass::Sigma0: return "sigma0";
    case BoundaryClass::SigmaT: return "sigmaT";
    case BoundaryClass::SigmaD: return "sigmaD";
    case BoundaryClass::SigmaR: return "sigmaR";
  }
  return "?";
}

bool parse_spatial_tag(const std::string& text, SpatialTag& out) {
  if (text == "dirichlet") {
    out = SpatialTag::Dirichlet;
  } else if (text == "dirichlet_moving") {
    out = SpatialTag::DirichletMoving;
  } else if (text == "robin_in") {
    out = SpatialTag::RobinIn;
  } else if (text == "robin_out") {
    out = SpatialTag::RobinOut;
  } else {
    return false;
  }
  return true;
}

FacetKey::FacetKey(std::span<const NodeId> ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) nodes[i] = ids[i];
  std::sort(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(ids.size()));
}

int FacetKey::num_nodes() const {
  int n = 0;
  while (n < kMaxDim && nodes[static_cast<std::size_t>(n)] >= 0) ++n;
  return n;
}

std::vector<Point> gather_points(const std::vector<Point>& coords, std::span<const NodeId> ids) {
  std::vector<Point> pts;
  pts.reserve(ids.size());
  for (NodeId id : ids) pts.push_back(coords[static_cast<std::size_t>(id)]);
  return pts;
}

double max_edge_length(std::span<const Point> pts, int ambient_dim) {
  double h = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      h = std::max(h, (pts[i] - pts[j]).head(ambient_dim).norm());
  return h;
}

std::vector<Point> SpatialMesh::element_points(int e) const {
  return gather_points(coords, elements[static_cast<std::size_t>(e)].node_span());
}

double SpatialMesh::element_measure(int e) const {
  auto pts = element_points(e);
  return simplex_measure(pts, dim);
}

double SpatialMesh::total_measure() const {
  double sum = 0.0;
  for (int e = 0; e < num_elements(); ++e) sum += element_measure(e);
  return sum;
}

double SpatialMesh::diameter() const {
  if (coords.empty()) return 0.0;
  Box box = bounding_box(coords);
  return (box.hi - box.lo).head(dim).norm();
}

std::vector<Point> SpaceTimeMesh::element_points(int e) const {
  return gather_points(coords, elements[static_cast<std::size_t>(e)].node_span());
}

double SpaceTimeMesh::element_measure(int e) const {
  auto pts = element_points(e);
  return simplex_measure(pts, dim);
}

double SpaceTimeMesh::total_measure() const {
  double sum = 0.0;
  for (int e = 0; e < num_elements(); ++e) sum += element_measure(e);
  return sum;
}

double SpaceTimeMesh::diameter() const {
  if (coords.empty()) return 0.0;
  Box box = bounding_box(coords);
  return (box.hi - box.lo).head(dim).norm();
}

namespace {

struct FacetKeyHash {
  std::size_t operator()(const FacetKey& k) const {
    std::size_t h = 0;
    for (NodeId n : k.nodes) h = h * 1000003u + static_cast<std::size_t>(n + 1);
    return h;
  }
};

}  // namespace

void extract_facets(SpaceTimeMesh& mesh) {
  struct Owners {
    int first = -1;
    int second = -1;
    int count = 0;
  };
  std::unordered_map<FacetKey, Owners, FacetKeyHash> table;
  table.reserve(mesh.elements.size() * static_cast<std::size_t>(mesh.dim + 1));

  const int nloc = mesh.dim + 1;
  std::array<NodeId, kMaxDim> face{};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Simplex& el = mesh.elements[static_cast<std::size_t>(e)];
    for (int drop = 0; drop < nloc; ++drop) {
      int m = 0;
      for (int i = 0; i < nloc; ++i)
        if (i != drop) face[static_cast<std::size_t>(m++)] = el[i];
      FacetKey key(std::span<const NodeId>(face.data(), static_cast<std::size_t>(m)));
      Owners& own = table[key];
      if (own.count == 0) {
        own.first = e;
      } else if (own.count == 1) {
        own.second = e;
      } else {
        std::ostringstream msg;
        msg << "facet shared by more than two elements (elements " << own.first << ", "
            << own.second << ", " << e << ")";
        throw AdmissibilityError(msg.str());
      }
      ++own.count;
    }
  }

  std::vector<std::pair<FacetKey, Owners>> ordered(table.begin(), table.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  mesh.interior_facets.clear();
  mesh.boundary_facets.clear();
  for (const auto& [key, own] : ordered) {
    Facet f;
    f.key = key;
    f.owner = std::min(own.first, own.count == 2 ? own.second : own.first);
    f.neighbor = own.count == 2 ? std::max(own.first, own.second) : -1;

    std::vector<Point> fpts;
    fpts.reserve(static_cast<std::size_t>(key.num_nodes()));
    for (int i = 0; i < key.num_nodes(); ++i)
      fpts.push_back(mesh.coords[static_cast<std::size_t>(key.nodes[static_cast<std::size_t>(i)])]);
    f.measure = simplex_measure(fpts, mesh.dim);
    auto owner_pts = mesh.element_points(f.owner);
    f.normal = facet_unit_normal(fpts, centroid(owner_pts), mesh.dim);

    if (own.count == 2) {
      mesh.interior_facets.push_back(f);
    } else {
      mesh.boundary_facets.push_back(f);
    }
  }
}

void compute_mesh_sizes(SpaceTimeMesh& mesh) {
  mesh.h.resize(static_cast<std::size_t>(mesh.num_elements()));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto pts = mesh.element_points(e);
    mesh.h[static_cast<std::size_t>(e)] = max_edge_length(pts, mesh.dim);
  }
}

std::map<FacetKey, SpatialFacetInfo> spatial_facets(const SpatialMesh& mesh) {
  std::map<FacetKey, SpatialFacetInfo> table;
  const int nloc = mesh.dim + 1;
  std::array<NodeId, kMaxDim> face{};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Simplex& el = mesh.elements[static_cast<std::size_t>(e)];
    for (int drop = 0; drop < nloc; ++drop) {
      int m = 0;
      for (int i = 0; i < nloc; ++i)
        if (i != drop) face[static_cast<std::size_t>(m++)] = el[i];
      FacetKey key(std::span<const NodeId>(face.data(), static_cast<std::size_t>(m)));
      SpatialFacetInfo& info = table[key];
      if (info.count == 0) info.owner = e;
      ++info.count;
    }
  }
  return table;
}

std::vector<bool> boundary_node_mask(const SpatialMesh& mesh) {
  std::vector<bool> mask(static_cast<std::size_t>(mesh.num_nodes()), false);
  for (const auto& [key, info] : spatial_facets(mesh)) {
    if (info.count != 1) continue;
    for (int i = 0; i < key.num_nodes(); ++i)
      mask[static_cast<std::size_t>(key.nodes[static_cast<std::size_t>(i)])] = true;
  }
  return mask;
}

void validate_boundary_tags(const SpatialMesh& mesh) {
  auto table = spatial_facets(mesh);
  for (const auto& [key, info] : table) {
    if (info.count > 2) {
      std::ostringstream msg;
      msg << "spatial facet owned by " << info.count << " elements";
      throw AdmissibilityError(msg.str());
    }
    const bool tagged = mesh.boundary_tags.count(key) > 0;
    if (info.count == 1 && !tagged) {
      std::ostringstream msg;
      msg << "untagged boundary facet (first node " << key.nodes[0] << ")";
      throw ParseError(msg.str());
    }
    if (info.count == 2 && tagged) {
      std::ostringstream msg;
      msg << "interior facet carries a boundary tag (first node " << key.nodes[0] << ")";
      throw ParseError(msg.str());
    }
  }
  for (const auto& [key, tag] : mesh.boundary_tags) {
    (void)tag;
    if (table.find(key) == table.end()) {
      std::ostringstream msg;
      msg << "boundary tag references a non-existent facet (first node " << key.nodes[0] << ")";
      throw ParseError(msg.str());
    }
  }
}

}  // namespace stmesh
