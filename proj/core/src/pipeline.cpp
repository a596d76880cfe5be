#include "stmesh/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stmesh/builtin_meshes.hpp"
#include "stmesh/matrix_market.hpp"
#include "stmesh/numbering.hpp"

namespace stmesh {

MotionSpec motion_from_config(const RunConfig& config) {
  MotionSpec spec;
  spec.time_horizon = config.levels.empty() ? config.T : config.levels.back();
  spec.smoothing = config.smoothing == "boundary" ? SmoothingPolicy::BoundaryOnly
                                                  : SmoothingPolicy::Laplacian;
  if (config.motion == "pump") {
    spec.kind = MotionKind::BuiltinPump;
    spec.pump_amplitude = config.motion_amplitude;
    spec.pump_radius = config.membrane_radius;
    spec.pump_z_only = config.pump_z_only;
  } else if (config.motion == "ypipe") {
    spec.kind = MotionKind::BuiltinYPipe;
  }
  return spec;
}

SpaceTimeMesh extrude_from_config(const SpatialMesh& input, const RunConfig& config) {
  config.validate();
  SpatialMesh mesh = make_consistent(input);
  if (config.check_input) {
    validate_boundary_tags(mesh);
    AdmissibilityReport report = check_admissible(mesh);
    if (!report.degenerate_elements.empty()) {
      std::ostringstream msg;
      msg << "input mesh has " << report.degenerate_elements.size()
          << " degenerate elements (first: " << report.degenerate_elements.front() << ")";
      throw DegenerateElementError(msg.str());
    }
    if (!report.conforming()) {
      std::ostringstream msg;
      msg << "input mesh is not admissible (" << report.violations.size()
          << " violations, first pair " << report.violations.front().elem_a << "/"
          << report.violations.front().elem_b << ")";
      throw AdmissibilityError(msg.str());
    }
  }
  const std::vector<double> partition = config.time_partition();
  MotionSpec motion = motion_from_config(config);
  LevelDisplacements displacements = build_level_displacements(mesh, motion, partition);
  return extrude_multi(mesh, partition, displacements);
}

NodalField average_velocity_field(const SpaceTimeMesh& mesh, const Eigen::VectorXd& velocity,
                                  const std::string& name) {
  const int d = mesh.spatial_dim();
  const int nn = mesh.dim + 1;
  DgSpace vspace{&mesh, DgSpaceKind::VelocityP1Vector};
  NodalField field;
  field.name = name;
  field.components = d;
  field.values.assign(static_cast<std::size_t>(mesh.num_nodes()) * static_cast<std::size_t>(d),
                      0.0);
  std::vector<int> count(static_cast<std::size_t>(mesh.num_nodes()), 0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Simplex& el = mesh.elements[static_cast<std::size_t>(e)];
    for (int i = 0; i < nn; ++i) {
      const NodeId node = el[i];
      ++count[static_cast<std::size_t>(node)];
      for (int c = 0; c < d; ++c)
        field.values[static_cast<std::size_t>(node) * static_cast<std::size_t>(d) +
                     static_cast<std::size_t>(c)] += velocity(vspace.vdof(e, i, c));
    }
  }
  for (int node = 0; node < mesh.num_nodes(); ++node)
    if (count[static_cast<std::size_t>(node)] > 0)
      for (int c = 0; c < d; ++c)
        field.values[static_cast<std::size_t>(node) * static_cast<std::size_t>(d) +
                     static_cast<std::size_t>(c)] /= count[static_cast<std::size_t>(node)];
  return field;
}

void write_solution_slices(const std::string& out_dir, const SpaceTimeMesh& mesh,
                           const std::vector<double>& times, const SolveResult* solution) {
  std::filesystem::create_directories(out_dir);
  std::vector<NodalField> point_fields;
  std::vector<ElementBasis> bases;
  DgSpace vspace{&mesh, DgSpaceKind::VelocityP1Vector};
  if (solution) {
    point_fields.push_back(average_velocity_field(mesh, solution->velocity));
    bases = build_element_bases(mesh);
  }

  const int d = mesh.spatial_dim();
  const int nn = mesh.dim + 1;
  for (std::size_t s = 0; s < times.size(); ++s) {
    SliceComplex complex = slice_mesh(mesh, times[s], point_fields);
    std::vector<CellField> cell_fields;
    if (solution) {
      CellField pressure;
      pressure.name = "pressure";
      pressure.components = 1;
      CellField velocity;
      velocity.name = "cell_velocity";
      velocity.components = d;
      for (const SliceCell& cell : complex.cells) {
        const int e = cell.source_element;
        pressure.values.push_back(solution->pressure(e));
        Point centroid = Point::Zero();
        const int np = cell_type_points(cell.type);
        for (int i = 0; i < np; ++i)
          centroid += complex.points[static_cast<std::size_t>(cell.points[static_cast<std::size_t>(i)])];
        centroid /= static_cast<double>(np);
        Eigen::VectorXd lam = bases[static_cast<std::size_t>(e)].barycentric(centroid, mesh.dim);
        for (int c = 0; c < d; ++c) {
          double value = 0.0;
          for (int i = 0; i < nn; ++i) value += lam(i) * solution->velocity(vspace.vdof(e, i, c));
          velocity.values.push_back(value);
        }
      }
      cell_fields.push_back(std::move(pressure));
      cell_fields.push_back(std::move(velocity));
    }
    std::ostringstream name;
    name << out_dir << "/slice_" << s << ".vtk";
    std::ostringstream title;
    char tbuf[32];
    std::snprintf(tbuf, sizeof tbuf, "%.17g", times[s]);
    title << "slice t = " << tbuf;
    write_vtk(name.str(), complex, title.str(), cell_fields);
  }
}

SolveOutcome run_solve(const SpatialMesh& mesh, const RunConfig& config) {
  config.validate();
  SolveOutcome outcome;
  outcome.mesh = extrude_from_config(mesh, config);

  MotionSpec motion = motion_from_config(config);
  ProblemData data;
  if (config.problem == "manufactured") {
    if (mesh.dim != 1) throw Error("the manufactured problem runs on d = 1 meshes");
    Manufactured1d manufactured;
    manufactured.nu = config.nu;
    data = manufactured.problem_data();
  } else if (config.problem == "pump") {
    data = pump_problem(motion, config.nu);
  } else if (config.problem == "ypipe") {
    data = pipe_problem(motion, config.nu);
  } else {
    data = constant_velocity_problem(Point::Zero(), config.nu);
  }

  StokesAssembler assembler(outcome.mesh, config.solver);
  outcome.velocity_dofs = count_dofs(assembler.velocity_space());
  outcome.pressure_dofs = count_dofs(assembler.pressure_space());
  BlockSystem system = assembler.build_block_system(data);

  std::filesystem::create_directories(config.out_dir);
  if (config.export_matrices) {
    write_matrix_market(config.out_dir + "/system_K.mtx", system.K);
    write_matrix_market(config.out_dir + "/system_B.mtx", system.B);
    write_matrix_market(config.out_dir + "/system_D.mtx", system.D);
  }

  outcome.solution = gmres_solve(system, config.solver);
  write_residual_csv(config.out_dir + "/residual_history.csv",
                     outcome.solution.residual_history);

  if (!config.slice_times.empty())
    write_solution_slices(config.out_dir, outcome.mesh, config.slice_times, &outcome.solution);
  return outcome;
}

SolutionErrors manufactured_errors(const SpaceTimeMesh& mesh, const SolveResult& solution,
                                   const Manufactured1d& exact) {
  const int nn = mesh.dim + 1;
  DgSpace vspace{&mesh, DgSpaceKind::VelocityP1Vector};
  const QuadratureRule& rule = simplex_quadrature(mesh.dim, 5);

  // Pressure means over Q for both fields.
  double volume = 0.0, mean_h = 0.0, mean_exact = 0.0;
  std::vector<double> measures(static_cast<std::size_t>(mesh.num_elements()));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double measure = mesh.element_measure(e);
    measures[static_cast<std::size_t>(e)] = measure;
    volume += measure;
    mean_h += measure * solution.pressure(e);
    auto pts = mesh.element_points(e);
    const double scale = quadrature_scale(measure, mesh.dim);
    for (int q = 0; q < rule.num_points(); ++q) {
      const Point x = quadrature_point(rule.bary[static_cast<std::size_t>(q)], pts);
      mean_exact += rule.weights[static_cast<std::size_t>(q)] * scale * exact.exact_p(x[0], x[1]);
    }
  }
  mean_h /= volume;
  mean_exact /= volume;

  SolutionErrors errors;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto pts = mesh.element_points(e);
    const double scale = quadrature_scale(measures[static_cast<std::size_t>(e)], mesh.dim);
    for (int q = 0; q < rule.num_points(); ++q) {
      const Eigen::VectorXd& lam = rule.bary[static_cast<std::size_t>(q)];
      const double w = rule.weights[static_cast<std::size_t>(q)] * scale;
      const Point x = quadrature_point(lam, pts);
      double uh = 0.0;
      for (int i = 0; i < nn; ++i) uh += lam(i) * solution.velocity(vspace.vdof(e, i, 0));
      const double du = uh - exact.exact_u(x[0], x[1]);
      errors.velocity_l2 += w * du * du;
      const double dp =
          (solution.pressure(e) - mean_h) - (exact.exact_p(x[0], x[1]) - mean_exact);
      errors.pressure_l2 += w * dp * dp;
    }
  }
  errors.velocity_l2 = std::sqrt(errors.velocity_l2);
  errors.pressure_l2 = std::sqrt(errors.pressure_l2);
  return errors;
}

std::vector<ConvergenceRow> run_manufactured_sweep(const RunConfig& config) {
  config.validate();
  Manufactured1d exact;
  exact.nu = config.nu;
  ProblemData data = exact.problem_data();

  // The sweep measures discretization error, so the linear solves run well
  // below it.
  SolverConfig solver = config.solver;
  solver.gmres.rel_tol = std::min(solver.gmres.rel_tol, 1e-10);
  solver.gmres.max_iter = std::max(solver.gmres.max_iter, 4000);

  std::vector<ConvergenceRow> rows;
  for (int level = 0; level <= config.refinements; ++level) {
    const int n = config.manufactured_cells << level;
    SpatialMesh mesh = interval_mesh(n);
    std::vector<double> partition;
    for (int k = 0; k <= n; ++k) partition.push_back(config.T * k / n);
    SpaceTimeMesh st = extrude_multi(mesh, partition);

    StokesAssembler assembler(st, solver);
    BlockSystem system = assembler.build_block_system(data);
    SolveResult solution = gmres_solve(system, solver);
    SolutionErrors errors = manufactured_errors(st, solution, exact);

    ConvergenceRow row;
    row.cells = n;
    row.velocity_dofs = count_dofs(assembler.velocity_space());
    row.velocity_l2 = errors.velocity_l2;
    row.pressure_l2 = errors.pressure_l2;
    row.iterations = solution.iterations;
    rows.push_back(row);
  }

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    std::ofstream csv(config.out_dir + "/errors.csv");
    csv << "cells,velocity_dofs,velocity_l2,pressure_l2,iterations\n";
    char buf[64];
    for (const ConvergenceRow& row : rows) {
      std::snprintf(buf, sizeof buf, "%d,%ld,%.17g,%.17g,%d", row.cells, row.velocity_dofs,
                    row.velocity_l2, row.pressure_l2, row.iterations);
      csv << buf << "\n";
    }
  }
  return rows;
}

}  // namespace stmesh
