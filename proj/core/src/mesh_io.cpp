#include "stmesh/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "stmesh/extrusion.hpp"

namespace stmesh {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty, non-comment line.
  bool next(std::istringstream& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_number_;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      line.clear();
      line.str(raw);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "line " << line_number_ << ": " << what;
    throw ParseError(msg.str());
  }

  int line_number() const { return line_number_; }

 private:
  std::istream& in_;
  int line_number_ = 0;
};

void format_coord(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void expect_keyword(LineReader& reader, std::istringstream& line, const std::string& keyword) {
  if (!reader.next(line)) reader.fail("expected '" + keyword + "', got end of file");
  std::string word;
  line >> word;
  if (word != keyword) reader.fail("expected '" + keyword + "', got '" + word + "'");
}

void check_duplicate_nodes(const std::vector<Point>& coords, int dim) {
  std::map<std::array<double, 4>, int> seen;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    std::array<double, 4> key{0.0, 0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c) key[static_cast<std::size_t>(c)] = coords[i][c];
    auto [it, inserted] = seen.emplace(key, static_cast<int>(i));
    if (!inserted) {
      std::ostringstream msg;
      msg << "duplicate nodes " << it->second << " and " << i;
      throw ParseError(msg.str());
    }
  }
}

std::vector<Point> read_node_block(LineReader& reader, int count, int dim) {
  std::vector<Point> coords(static_cast<std::size_t>(count), Point::Zero());
  std::vector<bool> seen(static_cast<std::size_t>(count), false);
  std::istringstream line;
  for (int i = 0; i < count; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of node block");
    long id = -1;
    line >> id;
    if (!line || id < 0 || id >= count) reader.fail("node index out of range");
    if (seen[static_cast<std::size_t>(id)]) reader.fail("repeated node index");
    seen[static_cast<std::size_t>(id)] = true;
    for (int c = 0; c < dim; ++c) {
      double v;
      line >> v;
      if (!line) reader.fail("malformed node coordinates");
      coords[static_cast<std::size_t>(id)][c] = v;
    }
  }
  return coords;
}

std::vector<Simplex> read_element_block(LineReader& reader, int count, int dim, int num_nodes) {
  std::vector<Simplex> elements(static_cast<std::size_t>(count));
  std::istringstream line;
  for (int i = 0; i < count; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of element block");
    long id = -1;
    line >> id;
    if (!line || id < 0 || id >= count) reader.fail("element index out of range");
    Simplex el;
    el.dim = static_cast<std::int8_t>(dim);
    for (int j = 0; j <= dim; ++j) {
      long n;
      line >> n;
      if (!line) reader.fail("malformed element connectivity");
      if (n < 0 || n >= num_nodes) reader.fail("element references node out of range");
      el[j] = static_cast<NodeId>(n);
    }
    for (int a = 0; a <= dim; ++a)
      for (int b = a + 1; b <= dim; ++b)
        if (el[a] == el[b]) reader.fail("element with repeated node");
    elements[static_cast<std::size_t>(id)] = el;
  }
  return elements;
}

}  // namespace

SpatialMesh read_spatial_mesh(std::istream& in, const MeshReadOptions& options) {
  LineReader reader(in);
  std::istringstream line;
  std::string word;

  if (!reader.next(line)) reader.fail("empty mesh file");
  int version = 0;
  line >> word >> version;
  if (word != "stmesh" || version != 1) reader.fail("expected header 'stmesh 1'");

  expect_keyword(reader, line, "dim");
  int dim = 0;
  line >> dim;
  if (dim < 1 || dim > 3) reader.fail("spatial dimension must be 1, 2 or 3");

  expect_keyword(reader, line, "nodes");
  int num_nodes = 0;
  line >> num_nodes;
  if (num_nodes <= 0) reader.fail("node count must be positive");

  SpatialMesh mesh;
  mesh.dim = dim;
  mesh.coords = read_node_block(reader, num_nodes, dim);

  expect_keyword(reader, line, "elements");
  int num_elements = 0;
  line >> num_elements;
  if (num_elements <= 0) reader.fail("element count must be positive");
  mesh.elements = read_element_block(reader, num_elements, dim, num_nodes);

  expect_keyword(reader, line, "boundary");
  int num_boundary = 0;
  line >> num_boundary;
  std::array<NodeId, kMaxDim> facet{};
  for (int i = 0; i < num_boundary; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of boundary block");
    for (int j = 0; j < dim; ++j) {
      long n;
      line >> n;
      if (!line) reader.fail("malformed boundary facet");
      if (n < 0 || n >= num_nodes) reader.fail("boundary facet references node out of range");
      facet[static_cast<std::size_t>(j)] = static_cast<NodeId>(n);
    }
    std::string tag_name;
    line >> tag_name;
    SpatialTag tag;
    if (!parse_spatial_tag(tag_name, tag)) reader.fail("unknown boundary tag '" + tag_name + "'");
    FacetKey key(std::span<const NodeId>(facet.data(), static_cast<std::size_t>(dim)));
    if (!mesh.boundary_tags.emplace(key, tag).second) reader.fail("repeated boundary facet");
  }

  if (options.validate) {
    check_duplicate_nodes(mesh.coords, dim);
    validate_boundary_tags(mesh);
  }
  return mesh;
}

SpatialMesh read_spatial_mesh(const std::string& path, const MeshReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);
  try {
    return read_spatial_mesh(in, options);
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

void write_spatial_mesh(std::ostream& out, const SpatialMesh& mesh) {
  out << "stmesh 1\n";
  out << "dim " << mesh.dim << "\n";
  out << "nodes " << mesh.num_nodes() << "\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    out << i;
    for (int c = 0; c < mesh.dim; ++c) {
      out << ' ';
      format_coord(out, mesh.coords[static_cast<std::size_t>(i)][c]);
    }
    out << "\n";
  }
  out << "elements " << mesh.num_elements() << "\n";
  for (int e = 0; e < mesh.num_elements(); ++e) {
    out << e;
    for (NodeId n : mesh.elements[static_cast<std::size_t>(e)].node_span()) out << ' ' << n;
    out << "\n";
  }
  out << "boundary " << mesh.boundary_tags.size() << "\n";
  for (const auto& [key, tag] : mesh.boundary_tags) {
    for (int j = 0; j < key.num_nodes(); ++j) {
      if (j) out << ' ';
      out << key.nodes[static_cast<std::size_t>(j)];
    }
    out << ' ' << to_string(tag) << "\n";
  }
}

void write_spatial_mesh(const std::string& path, const SpatialMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  write_spatial_mesh(out, mesh);
}

void write_spacetime_mesh(std::ostream& out, const SpaceTimeMesh& mesh) {
  out << "stmesh 1\n";
  out << "kind spacetime\n";
  out << "dim " << mesh.dim << "\n";
  out << "time ";
  format_coord(out, mesh.t_begin);
  out << ' ';
  format_coord(out, mesh.t_end);
  out << "\n";
  out << "levels " << mesh.level_times.size() << " " << mesh.nodes_per_level << "\n";
  if (!mesh.level_times.empty()) {
    bool first = true;
    for (double t : mesh.level_times) {
      if (!first) out << ' ';
      format_coord(out, t);
      first = false;
    }
    out << "\n";
  }
  out << "nodes " << mesh.num_nodes() << "\n";
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    out << i;
    for (int c = 0; c < mesh.dim; ++c) {
      out << ' ';
      format_coord(out, mesh.coords[static_cast<std::size_t>(i)][c]);
    }
    out << "\n";
  }
  out << "elements " << mesh.num_elements() << "\n";
  for (int e = 0; e < mesh.num_elements(); ++e) {
    out << e;
    for (NodeId n : mesh.elements[static_cast<std::size_t>(e)].node_span()) out << ' ' << n;
    out << "\n";
  }
  out << "boundary " << mesh.boundary_facets.size() << "\n";
  for (const Facet& f : mesh.boundary_facets) {
    for (int j = 0; j < f.key.num_nodes(); ++j) {
      if (j) out << ' ';
      out << f.key.nodes[static_cast<std::size_t>(j)];
    }
    out << ' ' << to_string(f.cls);
    if (f.cls == BoundaryClass::SigmaD || f.cls == BoundaryClass::SigmaR)
      out << ' ' << to_string(f.tag);
    out << "\n";
  }
}

void write_spacetime_mesh(const std::string& path, const SpaceTimeMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  write_spacetime_mesh(out, mesh);
}

SpaceTimeMesh read_spacetime_mesh(std::istream& in) {
  LineReader reader(in);
  std::istringstream line;
  std::string word;

  if (!reader.next(line)) reader.fail("empty mesh file");
  int version = 0;
  line >> word >> version;
  if (word != "stmesh" || version != 1) reader.fail("expected header 'stmesh 1'");
  expect_keyword(reader, line, "kind");
  line >> word;
  if (word != "spacetime") reader.fail("expected a space-time mesh file");

  expect_keyword(reader, line, "dim");
  int dim = 0;
  line >> dim;
  if (dim < 2 || dim > 4) reader.fail("space-time dimension must be 2, 3 or 4");

  SpaceTimeMesh mesh;
  mesh.dim = dim;
  expect_keyword(reader, line, "time");
  line >> mesh.t_begin >> mesh.t_end;
  if (!line) reader.fail("malformed time range");

  expect_keyword(reader, line, "levels");
  int num_levels = 0;
  line >> num_levels >> mesh.nodes_per_level;
  if (!line || num_levels < 0) reader.fail("malformed levels header");
  if (num_levels > 0) {
    if (!reader.next(line)) reader.fail("expected level times");
    mesh.level_times.resize(static_cast<std::size_t>(num_levels));
    for (int i = 0; i < num_levels; ++i) {
      line >> mesh.level_times[static_cast<std::size_t>(i)];
      if (!line) reader.fail("malformed level times");
    }
  }

  expect_keyword(reader, line, "nodes");
  int num_nodes = 0;
  line >> num_nodes;
  if (num_nodes <= 0) reader.fail("node count must be positive");
  mesh.coords = read_node_block(reader, num_nodes, dim);

  expect_keyword(reader, line, "elements");
  int num_elements = 0;
  line >> num_elements;
  if (num_elements <= 0) reader.fail("element count must be positive");
  mesh.elements = read_element_block(reader, num_elements, dim, num_nodes);

  compute_mesh_sizes(mesh);
  extract_facets(mesh);

  expect_keyword(reader, line, "boundary");
  int num_boundary = 0;
  line >> num_boundary;
  std::map<FacetKey, std::pair<BoundaryClass, SpatialTag>> classes;
  std::array<NodeId, kMaxDim> facet{};
  for (int i = 0; i < num_boundary; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of boundary block");
    for (int j = 0; j < dim; ++j) {
      long n;
      line >> n;
      if (!line) reader.fail("malformed boundary facet");
      if (n < 0 || n >= num_nodes) reader.fail("boundary facet references node out of range");
      facet[static_cast<std::size_t>(j)] = static_cast<NodeId>(n);
    }
    std::string cls_name;
    line >> cls_name;
    BoundaryClass cls;
    SpatialTag tag = SpatialTag::Dirichlet;
    if (cls_name == "sigma0") {
      cls = BoundaryClass::Sigma0;
    } else if (cls_name == "sigmaT") {
      cls = BoundaryClass::SigmaT;
    } else if (cls_name == "sigmaD" || cls_name == "sigmaR") {
      cls = cls_name == "sigmaD" ? BoundaryClass::SigmaD : BoundaryClass::SigmaR;
      std::string tag_name;
      line >> tag_name;
      if (!parse_spatial_tag(tag_name, tag)) reader.fail("unknown boundary tag '" + tag_name + "'");
    } else {
      reader.fail("unknown boundary class '" + cls_name + "'");
    }
    FacetKey key(std::span<const NodeId>(facet.data(), static_cast<std::size_t>(dim)));
    classes[key] = {cls, tag};
  }
  for (Facet& f : mesh.boundary_facets) {
    auto it = classes.find(f.key);
    if (it == classes.end()) {
      std::ostringstream msg;
      msg << "boundary facet missing from file (first node " << f.key.nodes[0] << ")";
      throw ParseError(msg.str());
    }
    f.cls = it->second.first;
    f.tag = it->second.second;
  }
  if (static_cast<std::size_t>(num_boundary) != mesh.boundary_facets.size())
    throw ParseError("boundary block does not match the mesh boundary");
  return mesh;
}

SpaceTimeMesh read_spacetime_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);
  try {
    return read_spacetime_mesh(in);
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

SpatialMesh read_gmsh_mesh(std::istream& in, const MeshReadOptions& options) {
  LineReader reader(in);
  std::istringstream line;
  std::string word;

  std::map<int, SpatialTag> physical_tags;
  std::vector<Point> nodes;
  std::map<long, NodeId> node_renumber;
  struct RawElement {
    int type;
    int physical;
    std::array<long, 5> nodes;
  };
  std::vector<RawElement> raw;

  while (reader.next(line)) {
    line >> word;
    if (word == "$MeshFormat") {
      double version;
      if (!reader.next(line)) reader.fail("truncated $MeshFormat");
      line >> version;
      if (version < 2.0 || version >= 3.0) reader.fail("only Gmsh 2.x ASCII is supported");
      expect_keyword(reader, line, "$EndMeshFormat");
    } else if (word == "$PhysicalNames") {
      if (!reader.next(line)) reader.fail("truncated $PhysicalNames");
      int count;
      line >> count;
      for (int i = 0; i < count; ++i) {
        if (!reader.next(line)) reader.fail("truncated $PhysicalNames");
        int dim_ignored, id;
        std::string name;
        line >> dim_ignored >> id >> name;
        if (name.size() >= 2 && name.front() == '"') name = name.substr(1, name.size() - 2);
        SpatialTag tag;
        if (parse_spatial_tag(name, tag)) physical_tags[id] = tag;
      }
      expect_keyword(reader, line, "$EndPhysicalNames");
    } else if (word == "$Nodes") {
      if (!reader.next(line)) reader.fail("truncated $Nodes");
      long count;
      line >> count;
      for (long i = 0; i < count; ++i) {
        if (!reader.next(line)) reader.fail("truncated $Nodes");
        long id;
        double x, y, z;
        line >> id >> x >> y >> z;
        if (!line) reader.fail("malformed node line");
        node_renumber[id] = static_cast<NodeId>(nodes.size());
        nodes.push_back(make_point(x, y, z));
      }
      expect_keyword(reader, line, "$EndNodes");
    } else if (word == "$Elements") {
      if (!reader.next(line)) reader.fail("truncated $Elements");
      long count;
      line >> count;
      for (long i = 0; i < count; ++i) {
        if (!reader.next(line)) reader.fail("truncated $Elements");
        long id;
        int type, ntags;
        line >> id >> type >> ntags;
        if (!line) reader.fail("malformed element line");
        int physical = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag;
          line >> tag;
          if (t == 0) physical = tag;
        }
        // 15 = point, 1 = line, 2 = triangle, 4 = tetrahedron.
        int nn = 0;
        if (type == 15) {
          nn = 1;
        } else if (type == 1) {
          nn = 2;
        } else if (type == 2) {
          nn = 3;
        } else if (type == 4) {
          nn = 4;
        } else {
          std::ostringstream msg;
          msg << "unsupported Gmsh element type " << type << " (simplices only)";
          reader.fail(msg.str());
        }
        RawElement el{};
        el.type = nn;  // store node count
        el.physical = physical;
        for (int j = 0; j < nn; ++j) {
          line >> el.nodes[static_cast<std::size_t>(j)];
          if (!line) reader.fail("malformed element connectivity");
        }
        raw.push_back(el);
      }
      expect_keyword(reader, line, "$EndElements");
    }
    // Other sections are skipped by the outer loop.
  }
  if (nodes.empty() || raw.empty()) throw ParseError("gmsh file without nodes or elements");

  int max_nodes = 0;
  for (const RawElement& el : raw) max_nodes = std::max(max_nodes, el.type);
  const int dim = max_nodes - 1;
  if (dim < 1 || dim > 3) throw ParseError("gmsh mesh is not a 1/2/3-dimensional simplex mesh");

  SpatialMesh mesh;
  mesh.dim = dim;
  mesh.coords = nodes;
  auto tag_for = [&](int physical) {
    auto it = physical_tags.find(physical);
    if (it != physical_tags.end()) return it->second;
    switch (physical) {
      case 2: return SpatialTag::DirichletMoving;
      case 3: return SpatialTag::RobinIn;
      case 4: return SpatialTag::RobinOut;
      default: return SpatialTag::Dirichlet;
    }
  };
  for (const RawElement& el : raw) {
    std::array<NodeId, 5> ids{};
    for (int j = 0; j < el.type; ++j) {
      auto it = node_renumber.find(el.nodes[static_cast<std::size_t>(j)]);
      if (it == node_renumber.end()) throw ParseError("element references unknown node");
      ids[static_cast<std::size_t>(j)] = it->second;
    }
    if (el.type == max_nodes) {
      Simplex s;
      s.dim = static_cast<std::int8_t>(dim);
      for (int j = 0; j < el.type; ++j) s[j] = ids[static_cast<std::size_t>(j)];
      mesh.elements.push_back(s);
    } else if (el.type == max_nodes - 1) {
      FacetKey key(std::span<const NodeId>(ids.data(), static_cast<std::size_t>(el.type)));
      mesh.boundary_tags[key] = tag_for(el.physical);
    }
    // Lower-dimensional entities (points in 2d/3d meshes) are ignored.
  }
  if (mesh.elements.empty()) throw ParseError("gmsh file contains no volume elements");

  if (options.validate) {
    check_duplicate_nodes(mesh.coords, dim);
    validate_boundary_tags(mesh);
  }
  return mesh;
}

SpatialMesh read_gmsh_mesh(const std::string& path, const MeshReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);
  try {
    return read_gmsh_mesh(in, options);
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

}  // namespace stmesh
