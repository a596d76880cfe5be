#ifndef STMESH_PROBLEMS_HPP
#define STMESH_PROBLEMS_HPP

#include "stmesh/motion.hpp"
#include "stmesh/stokes.hpp"

namespace stmesh {

// Manufactured transient Stokes-like problem on the unit interval (d = 1):
//   u(x,t) = sin(pi x) exp(-t),   p(x,t) = x - 1/2,
// with the matching momentum source and a continuity source div u = g.
// All boundaries Dirichlet.
struct Manufactured1d {
  double nu = 1.0;

  double exact_u(double x, double t) const;
  double exact_p(double x, double t) const;
  ProblemData problem_data() const;
};

// Zero-data problem with a constant exact velocity: used for patch tests.
ProblemData constant_velocity_problem(const Point& velocity, double nu);

// Valve-driven problems for the builtin geometries; the Dirichlet datum on
// moving boundaries is the boundary velocity d/dt g_mov evaluated through the
// reference configuration (exact for z-only membrane motion, an approximate
// extension otherwise).
ProblemData pump_problem(const MotionSpec& motion, double nu);
ProblemData pipe_problem(const MotionSpec& motion, double nu);

}  // namespace stmesh

#endif
