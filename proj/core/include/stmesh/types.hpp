#ifndef STMESH_TYPES_HPP
#define STMESH_TYPES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace stmesh {

// Meshes live in dimensions 1..4 (spatial d in {1,2,3} plus one time axis).
inline constexpr int kMaxDim = 4;

using NodeId = std::int32_t;

// Geometric point/vector. Components beyond the mesh dimension are kept at
// zero so that dimension-generic code can operate on full Vector4d values.
using Point = Eigen::Vector4d;

inline Point make_point(double x = 0.0, double y = 0.0, double z = 0.0, double t = 0.0) {
  return Point(x, y, z, t);
}

// Tags attached to spatial boundary facets in the input mesh.
enum class SpatialTag : std::uint8_t {
  Dirichlet,
  DirichletMoving,
  RobinIn,
  RobinOut,
};

// Classification of space-time boundary facets.
enum class BoundaryClass : std::uint8_t {
  None,    // interior facet
  Sigma0,  // bottom, t = 0
  SigmaT,  // top, t = T
  SigmaD,  // Dirichlet mantle
  SigmaR,  // Robin mantle
};

const char* to_string(SpatialTag tag);
const char* to_string(BoundaryClass cls);
bool parse_spatial_tag(const std::string& text, SpatialTag& out);

// Element connectivity: an n-simplex holds n+1 node ids in a fixed order.
struct Simplex {
  std::array<NodeId, kMaxDim + 1> nodes{};
  std::int8_t dim = 0;  // intrinsic dimension n

  Simplex() = default;
  Simplex(std::initializer_list<NodeId> ids) {
    dim = static_cast<std::int8_t>(ids.size() - 1);
    int i = 0;
    for (NodeId id : ids) nodes[static_cast<std::size_t>(i++)] = id;
  }

  int num_nodes() const { return dim + 1; }
  NodeId operator[](int i) const { return nodes[static_cast<std::size_t>(i)]; }
  NodeId& operator[](int i) { return nodes[static_cast<std::size_t>(i)]; }
  std::span<const NodeId> node_span() const {
    return std::span<const NodeId>(nodes.data(), static_cast<std::size_t>(dim + 1));
  }
};

// Error hierarchy; the CLI maps each class to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class DegenerateElementError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace stmesh

#endif
