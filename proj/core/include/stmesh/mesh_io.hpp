#ifndef STMESH_MESH_IO_HPP
#define STMESH_MESH_IO_HPP

#include <iosfwd>
#include <string>

#include "stmesh/mesh.hpp"

namespace stmesh {

struct MeshReadOptions {
  bool validate = true;  // boundary tag coverage, duplicate nodes, index ranges
};

// Native ASCII format (see README): header, node block, element block,
// boundary block with tag strings. Coordinates are written with 17
// significant digits so write/read round-trips exactly.
SpatialMesh read_spatial_mesh(const std::string& path, const MeshReadOptions& options = {});
SpatialMesh read_spatial_mesh(std::istream& in, const MeshReadOptions& options = {});
void write_spatial_mesh(const std::string& path, const SpatialMesh& mesh);
void write_spatial_mesh(std::ostream& out, const SpatialMesh& mesh);

SpaceTimeMesh read_spacetime_mesh(const std::string& path);
SpaceTimeMesh read_spacetime_mesh(std::istream& in);
void write_spacetime_mesh(const std::string& path, const SpaceTimeMesh& mesh);
void write_spacetime_mesh(std::ostream& out, const SpaceTimeMesh& mesh);

// Minimal Gmsh 2.2 ASCII importer restricted to simplicial elements. Lower
// dimensional elements become boundary facets; their physical tag is mapped
// via 1 = dirichlet, 2 = dirichlet_moving, 3 = robin_in, 4 = robin_out, or by
// name when a $PhysicalNames section matches those strings.
SpatialMesh read_gmsh_mesh(const std::string& path, const MeshReadOptions& options = {});
SpatialMesh read_gmsh_mesh(std::istream& in, const MeshReadOptions& options = {});

}  // namespace stmesh

#endif
