#ifndef STMESH_NUMBERING_HPP
#define STMESH_NUMBERING_HPP

#include <utility>
#include <vector>

#include "stmesh/mesh.hpp"

namespace stmesh {

// Sorts every element's node list ascending by global node id. Geometry is
// unchanged; orientation of individual simplices may flip (all downstream
// integrals use absolute Jacobians).
SpatialMesh make_consistent(SpatialMesh mesh);

struct ConsistencyReport {
  bool consistent = true;
  // Element pairs whose shared node tuple appears in different relative order.
  std::vector<std::pair<int, int>> violations;
  // Element pairs sharing all nodes (duplicate elements): not an ordering
  // problem but a non-admissible intersection, reported separately.
  std::vector<std::pair<int, int>> non_admissible;
};

// Verifies that for every intersecting element pair the shared nodes appear
// in the same relative order within both elements' node lists.
ConsistencyReport check_consistent(const SpatialMesh& mesh);

// Per-node list of incident elements.
std::vector<std::vector<int>> node_to_elements(int num_nodes, const std::vector<Simplex>& elements);

}  // namespace stmesh

#endif
