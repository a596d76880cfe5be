#include "stmesh/numbering.hpp"

#include <algorithm>

namespace stmesh {

SpatialMesh make_consistent(SpatialMesh mesh) {
  for (Simplex& el : mesh.elements)
    std::sort(el.nodes.begin(), el.nodes.begin() + el.num_nodes());
  return mesh;
}

std::vector<std::vector<int>> node_to_elements(int num_nodes,
                                               const std::vector<Simplex>& elements) {
  std::vector<std::vector<int>> incident(static_cast<std::size_t>(num_nodes));
  for (std::size_t e = 0; e < elements.size(); ++e)
    for (NodeId n : elements[e].node_span())
      incident[static_cast<std::size_t>(n)].push_back(static_cast<int>(e));
  return incident;
}

namespace {

// Shared nodes of a and b in the relative order they appear within a.
std::vector<NodeId> shared_in_order(const Simplex& a, const Simplex& b) {
  std::vector<NodeId> shared;
  for (NodeId n : a.node_span()) {
    for (NodeId m : b.node_span()) {
      if (n == m) {
        shared.push_back(n);
        break;
      }
    }
  }
  return shared;
}

}  // namespace

ConsistencyReport check_consistent(const SpatialMesh& mesh) {
  ConsistencyReport report;
  auto incident = node_to_elements(mesh.num_nodes(), mesh.elements);

  // Enumerate each intersecting pair once, via their smallest shared node.
  for (std::size_t n = 0; n < incident.size(); ++n) {
    const auto& els = incident[n];
    for (std::size_t i = 0; i < els.size(); ++i) {
      for (std::size_t j = i + 1; j < els.size(); ++j) {
        const int a = std::min(els[i], els[j]);
        const int b = std::max(els[i], els[j]);
        const Simplex& sa = mesh.elements[static_cast<std::size_t>(a)];
        const Simplex& sb = mesh.elements[static_cast<std::size_t>(b)];
        std::vector<NodeId> shared_a = shared_in_order(sa, sb);
        // Visit each pair only at its smallest shared node.
        NodeId lowest = *std::min_element(shared_a.begin(), shared_a.end());
        if (lowest != static_cast<NodeId>(n)) continue;
        if (shared_a.size() == static_cast<std::size_t>(sa.num_nodes()) &&
            shared_a.size() == static_cast<std::size_t>(sb.num_nodes())) {
          report.non_admissible.emplace_back(a, b);
          report.consistent = false;
          continue;
        }
        std::vector<NodeId> shared_b = shared_in_order(sb, sa);
        if (shared_a != shared_b) {
          report.violations.emplace_back(a, b);
          report.consistent = false;
        }
      }
    }
  }
  return report;
}

}  // namespace stmesh
