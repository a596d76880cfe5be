#include "stmesh/vtk.hpp"

#include <cstdio>
#include <fstream>

namespace stmesh {

namespace {

void format_value(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  out << buf;
}

void write_scalar_or_vector(std::ostream& out, const std::string& name, int components,
                            const std::vector<double>& values, std::size_t count) {
  if (components == 1) {
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < count; ++i) {
      format_value(out, values[i]);
      out << "\n";
    }
  } else {
    out << "VECTORS " << name << " double\n";
    for (std::size_t i = 0; i < count; ++i) {
      for (int c = 0; c < 3; ++c) {
        if (c) out << ' ';
        format_value(out, c < components ? values[i * static_cast<std::size_t>(components) +
                                                  static_cast<std::size_t>(c)]
                                         : 0.0);
      }
      out << "\n";
    }
  }
}

}  // namespace

void write_vtk(std::ostream& out, const SliceComplex& complex, const std::string& title,
               const std::vector<CellField>& cell_fields) {
  out << "# vtk DataFile Version 3.0\n";
  out << title << "\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << complex.points.size() << " double\n";
  for (const Point& p : complex.points) {
    for (int c = 0; c < 3; ++c) {
      if (c) out << ' ';
      format_value(out, c < complex.dim ? p[c] : 0.0);
    }
    out << "\n";
  }

  std::size_t list_size = 0;
  for (const SliceCell& cell : complex.cells)
    list_size += static_cast<std::size_t>(cell_type_points(cell.type)) + 1;
  out << "CELLS " << complex.cells.size() << ' ' << list_size << "\n";
  for (const SliceCell& cell : complex.cells) {
    const int np = cell_type_points(cell.type);
    out << np;
    for (int i = 0; i < np; ++i) out << ' ' << cell.points[static_cast<std::size_t>(i)];
    out << "\n";
  }
  out << "CELL_TYPES " << complex.cells.size() << "\n";
  for (const SliceCell& cell : complex.cells) out << vtk_cell_type(cell.type) << "\n";

  if (!complex.point_fields.empty()) {
    out << "POINT_DATA " << complex.points.size() << "\n";
    for (const NodalField& f : complex.point_fields)
      write_scalar_or_vector(out, f.name, f.components, f.values, complex.points.size());
  }
  if (!cell_fields.empty()) {
    out << "CELL_DATA " << complex.cells.size() << "\n";
    for (const CellField& f : cell_fields)
      write_scalar_or_vector(out, f.name, f.components, f.values, complex.cells.size());
  }
}

void write_vtk(const std::string& path, const SliceComplex& complex, const std::string& title,
               const std::vector<CellField>& cell_fields) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  write_vtk(out, complex, title, cell_fields);
}

}  // namespace stmesh
