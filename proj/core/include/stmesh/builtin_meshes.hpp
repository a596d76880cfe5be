#ifndef STMESH_BUILTIN_MESHES_HPP
#define STMESH_BUILTIN_MESHES_HPP

#include <functional>

#include "stmesh/mesh.hpp"

namespace stmesh {

// All builders return consistently numbered meshes with every boundary facet
// tagged (dirichlet unless stated otherwise).

SpatialMesh interval_mesh(int n, double x0 = 0.0, double x1 = 1.0);
SpatialMesh unit_square_mesh(int n);
SpatialMesh unit_cube_mesh(int n);  // Kuhn/Freudenthal, 6 tets per cube

// Unit disk scaled to `radius`, built from a mapped square grid; node rings
// sit at radius * k / n.
SpatialMesh disk_mesh(int n, double radius);

// disk_mesh extruded along z into 3 tets per prism (admissible by the same
// sorted-node decomposition used for time slabs).
SpatialMesh cylinder_mesh(int n_xy, int n_z, double radius, double z0, double z1);

// Diaphragm-pump chamber at desk scale: cylinder r = 0.8, z in [-0.4, 0.4].
// Top cap inside `membrane_radius` is dirichlet_moving, side patches around
// mid-height are robin_in (x > 0) / robin_out (x < 0), the rest dirichlet.
// On return membrane_radius holds the mesh ring radius actually used.
SpatialMesh pump_mesh(int n_xy, int n_z, double* membrane_radius = nullptr);

// Straight-pipe stand-in for the branched pipe geometry: r = 3,
// z in [-10, 7]. Bottom cap and the side strip z < -3 are dirichlet_moving,
// the top cap splits into robin_in (x < 0) / robin_out (x > 0).
SpatialMesh pipe_mesh(int n_xy, int n_z);

// Replaces all boundary tags using a predicate on the facet's points.
using TagPredicate = std::function<SpatialTag(std::span<const Point> facet_points)>;
void tag_boundary(SpatialMesh& mesh, const TagPredicate& classify);

}  // namespace stmesh

#endif
