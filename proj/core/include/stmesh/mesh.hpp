#ifndef STMESH_MESH_HPP
#define STMESH_MESH_HPP

#include <map>
#include <optional>
#include <vector>

#include "stmesh/geometry.hpp"
#include "stmesh/types.hpp"

namespace stmesh {

// Sorted node tuple identifying a facet; unused slots padded with -1.
struct FacetKey {
  std::array<NodeId, kMaxDim> nodes{-1, -1, -1, -1};

  FacetKey() = default;
  explicit FacetKey(std::span<const NodeId> ids);

  int num_nodes() const;
  auto operator<=>(const FacetKey&) const = default;
};

struct Facet {
  FacetKey key;
  int owner = -1;     // element index k
  int neighbor = -1;  // element index l with k < l, or -1 on the boundary
  BoundaryClass cls = BoundaryClass::None;
  // Spatial tag inherited from the generating spatial boundary facet; only
  // meaningful for mantle facets (SigmaD / SigmaR).
  SpatialTag tag = SpatialTag::Dirichlet;
  Point normal = Point::Zero();  // unit, outward with respect to `owner`
  double measure = 0.0;

  // Time component of the normal; the time axis is the mesh's last coordinate.
  double normal_time(int mesh_dim) const { return normal[mesh_dim - 1]; }
  bool is_boundary() const { return neighbor < 0; }
};

// d-dimensional simplicial mesh (d in {1,2,3}) with tagged boundary facets.
struct SpatialMesh {
  int dim = 0;
  std::vector<Point> coords;
  std::vector<Simplex> elements;
  std::map<FacetKey, SpatialTag> boundary_tags;

  int num_nodes() const { return static_cast<int>(coords.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }

  std::vector<Point> element_points(int e) const;
  double element_measure(int e) const;
  double total_measure() const;
  double diameter() const;  // bounding-box diagonal
};

// (d+1)-dimensional simplex mesh; the last coordinate is time.
struct SpaceTimeMesh {
  int dim = 0;  // d+1
  std::vector<Point> coords;
  std::vector<Simplex> elements;
  std::vector<Facet> interior_facets;
  std::vector<Facet> boundary_facets;
  std::vector<double> h;  // per-element mesh size (max edge length)
  double t_begin = 0.0;
  double t_end = 0.0;

  // Extrusion provenance (0 / empty when the mesh was not built by extrusion):
  // node id = level * nodes_per_level + spatial node id.
  int nodes_per_level = 0;
  std::vector<double> level_times;

  int num_nodes() const { return static_cast<int>(coords.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }

  std::vector<Point> element_points(int e) const;
  double element_measure(int e) const;
  double total_measure() const;
  double diameter() const;

  int spatial_dim() const { return dim - 1; }
  int node_level(NodeId n) const { return nodes_per_level > 0 ? n / nodes_per_level : -1; }
  NodeId spatial_node(NodeId n) const { return nodes_per_level > 0 ? n % nodes_per_level : n; }
};

std::vector<Point> gather_points(const std::vector<Point>& coords, std::span<const NodeId> ids);
double max_edge_length(std::span<const Point> pts, int ambient_dim);

// Facet extraction for the space-time mesh. Every d-subsimplex shared by two
// elements becomes one interior facet oriented outward from the lower element
// index; unshared ones become boundary facets with class None (classification
// happens in classify_boundary). A subsimplex owned by more than two elements
// throws AdmissibilityError. Output is ordered by facet key.
void extract_facets(SpaceTimeMesh& mesh);

// Recompute per-element mesh sizes h_k (max edge length).
void compute_mesh_sizes(SpaceTimeMesh& mesh);

// Facets of the spatial mesh, keyed by sorted node tuple, with owner count.
struct SpatialFacetInfo {
  int owner = -1;
  int count = 0;
};
std::map<FacetKey, SpatialFacetInfo> spatial_facets(const SpatialMesh& mesh);

// Nodes lying on the geometric boundary (member of a single-owner facet).
std::vector<bool> boundary_node_mask(const SpatialMesh& mesh);

// Checks that boundary_tags covers exactly the single-owner facets; throws
// ParseError naming the first offending facet otherwise.
void validate_boundary_tags(const SpatialMesh& mesh);

}  // namespace stmesh

#endif
