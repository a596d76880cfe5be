#ifndef STMESH_ADMISSIBILITY_HPP
#define STMESH_ADMISSIBILITY_HPP

#include <string>
#include <vector>

#include "stmesh/mesh.hpp"

namespace stmesh {

struct AdmissibilityViolation {
  int elem_a = -1;
  int elem_b = -1;
  Point witness = Point::Zero();  // a point of the intersection outside the shared subsimplex
  std::string what;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityViolation> violations;
  std::vector<int> degenerate_elements;  // zero-measure elements, reported separately

  bool conforming() const { return violations.empty(); }
  bool admissible() const { return violations.empty() && degenerate_elements.empty(); }
};

// Verifies that any two elements with intersecting closures meet exactly in
// the simplex spanned by their shared nodes. Candidate pairs come from node
// adjacency plus a bounding-box grid; each pair is first screened with a
// separating-hyperplane certificate and only suspicious pairs run the full
// witness-point tests (hanging nodes, partial overlaps, crossing diagonals).
AdmissibilityReport check_admissible(const SpatialMesh& mesh);
AdmissibilityReport check_admissible(const SpaceTimeMesh& mesh);

AdmissibilityReport check_admissible_raw(int dim, const std::vector<Point>& coords,
                                         const std::vector<Simplex>& elements);

}  // namespace stmesh

#endif
