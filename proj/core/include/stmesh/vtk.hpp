#ifndef STMESH_VTK_HPP
#define STMESH_VTK_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "stmesh/slicing.hpp"

namespace stmesh {

// Per-cell field on a slice complex (e.g. elementwise pressure).
struct CellField {
  std::string name;
  int components = 1;
  std::vector<double> values;
};

// Legacy ASCII VTK unstructured grid: tetrahedra (10), wedges (13),
// triangles (5), quads (9), lines (3). Field values are written in fixed
// scientific notation with 17 significant digits.
void write_vtk(std::ostream& out, const SliceComplex& complex, const std::string& title,
               const std::vector<CellField>& cell_fields = {});
void write_vtk(const std::string& path, const SliceComplex& complex, const std::string& title,
               const std::vector<CellField>& cell_fields = {});

}  // namespace stmesh

#endif
