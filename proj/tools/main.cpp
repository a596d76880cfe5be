#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "stmesh/numbering.hpp"
#include "stmesh/pipeline.hpp"

namespace {

// Exit codes per failure class.
constexpr int kExitParse = 2;
constexpr int kExitConsistency = 3;
constexpr int kExitAdmissibility = 4;
constexpr int kExitDegenerate = 5;
constexpr int kExitSolver = 6;

using namespace stmesh;

struct CommonOptions {
  std::string mesh_path;
  std::string config_path;
  std::string out_dir;
  bool gmsh = false;
  bool no_check = false;
  double tol = -1.0;
  double sigma_u = -1.0;
  double sigma_p = -1.0;
  std::string slices;
};

void add_mesh_option(CLI::App* cmd, CommonOptions& opts, bool required = true) {
  auto* opt = cmd->add_option("--mesh,-m", opts.mesh_path, "input mesh file (native format)");
  if (required) opt->required();
  cmd->add_flag("--gmsh", opts.gmsh, "read the mesh as Gmsh 2.2 ASCII");
  cmd->add_flag("--no-check", opts.no_check, "skip consistency/admissibility checks on load");
}

SpatialMesh load_mesh(const CommonOptions& opts) {
  MeshReadOptions read_opts;
  read_opts.validate = !opts.no_check;
  return opts.gmsh ? read_gmsh_mesh(opts.mesh_path, read_opts)
                   : read_spatial_mesh(opts.mesh_path, read_opts);
}

RunConfig load_config(const CommonOptions& opts) {
  RunConfig config =
      opts.config_path.empty() ? RunConfig{} : parse_run_config_file(opts.config_path);
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  if (opts.tol > 0.0) config.solver.gmres.rel_tol = opts.tol;
  if (opts.sigma_u > 0.0) config.solver.sigma_u = opts.sigma_u;
  if (opts.sigma_p > 0.0) config.solver.sigma_p = opts.sigma_p;
  if (opts.no_check) config.check_input = false;
  if (!opts.slices.empty()) {
    config.slice_times.clear();
    std::stringstream stream(opts.slices);
    std::string item;
    while (std::getline(stream, item, ',')) config.slice_times.push_back(std::stod(item));
  }
  return config;
}

int cmd_info(const CommonOptions& opts) {
  SpatialMesh mesh = load_mesh(opts);
  std::printf("dim        %d\n", mesh.dim);
  std::printf("nodes      %d\n", mesh.num_nodes());
  std::printf("elements   %d\n", mesh.num_elements());
  std::printf("boundary   %zu\n", mesh.boundary_tags.size());
  std::printf("measure    %.17g\n", mesh.total_measure());
  double h_min = 1e300, h_max = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    auto pts = mesh.element_points(e);
    const double h = max_edge_length(pts, mesh.dim);
    h_min = std::min(h_min, h);
    h_max = std::max(h_max, h);
  }
  std::printf("h          [%.6g, %.6g]\n", h_min, h_max);
  return 0;
}

int cmd_check(const CommonOptions& opts) {
  SpatialMesh mesh = make_consistent(load_mesh(opts));
  ConsistencyReport consistency = check_consistent(mesh);
  if (!consistency.consistent) {
    std::printf("consistency FAILED (%zu ordering violations, %zu non-admissible pairs)\n",
                consistency.violations.size(), consistency.non_admissible.size());
    return kExitConsistency;
  }
  std::printf("consistency OK\n");
  AdmissibilityReport report = check_admissible(mesh);
  if (!report.degenerate_elements.empty()) {
    std::printf("degenerate elements: %zu (first: %d)\n", report.degenerate_elements.size(),
                report.degenerate_elements.front());
    return kExitDegenerate;
  }
  if (!report.conforming()) {
    std::printf("admissibility FAILED (%zu violations)\n", report.violations.size());
    for (std::size_t i = 0; i < std::min<std::size_t>(report.violations.size(), 10); ++i) {
      const auto& v = report.violations[i];
      std::printf("  elements %d/%d: %s\n", v.elem_a, v.elem_b, v.what.c_str());
    }
    return kExitAdmissibility;
  }
  std::printf("admissibility OK\n");
  return 0;
}

int cmd_extrude(const CommonOptions& opts, const std::string& out_path) {
  SpatialMesh mesh = load_mesh(opts);
  RunConfig config = load_config(opts);
  SpaceTimeMesh st = extrude_from_config(mesh, config);
  write_spacetime_mesh(out_path, st);
  std::printf("wrote %s: %d nodes, %d elements, %zu boundary facets\n", out_path.c_str(),
              st.num_nodes(), st.num_elements(), st.boundary_facets.size());
  return 0;
}

int cmd_slice(const CommonOptions& opts) {
  SpaceTimeMesh st = read_spacetime_mesh(opts.mesh_path);
  RunConfig config = load_config(opts);
  if (config.slice_times.empty()) throw Error("no slice times given (--slices t1,t2,...)");
  write_solution_slices(config.out_dir, st, config.slice_times, nullptr);
  std::printf("wrote %zu slices to %s\n", config.slice_times.size(), config.out_dir.c_str());
  return 0;
}

int cmd_solve(const CommonOptions& opts) {
  RunConfig config = load_config(opts);
  if (config.problem == "manufactured" && opts.mesh_path.empty()) {
    auto rows = run_manufactured_sweep(config);
    std::printf("cells  velocity_dofs  velocity_l2    pressure_l2    iters\n");
    for (const auto& row : rows)
      std::printf("%-6d %-14ld %-14.6e %-14.6e %d\n", row.cells, row.velocity_dofs,
                  row.velocity_l2, row.pressure_l2, row.iterations);
    return 0;
  }
  if (opts.mesh_path.empty()) throw Error("solve needs --mesh (or problem = manufactured)");
  SpatialMesh mesh = load_mesh(opts);
  SolveOutcome outcome = run_solve(mesh, config);
  std::printf("elements        %d\n", outcome.mesh.num_elements());
  std::printf("velocity dofs   %ld\n", outcome.velocity_dofs);
  std::printf("pressure dofs   %ld\n", outcome.pressure_dofs);
  std::printf("gmres iters     %d\n", outcome.solution.iterations);
  std::printf("final residual  %.6e\n", outcome.solution.residual_history.back());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time simplex meshing and DG Stokes solver"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string extrude_out = "spacetime.stm";

  auto* info = app.add_subcommand("info", "print mesh counts and measures");
  add_mesh_option(info, opts);

  auto* check = app.add_subcommand("check", "consistency and admissibility checks");
  add_mesh_option(check, opts);

  auto* extrude = app.add_subcommand("extrude", "extrude a spatial mesh into space-time");
  add_mesh_option(extrude, opts);
  extrude->add_option("--config,-c", opts.config_path, "run configuration file");
  extrude->add_option("--out,-o", extrude_out, "output space-time mesh file");

  auto* slice = app.add_subcommand("slice", "slice a space-time mesh into VTK files");
  slice->add_option("--mesh,-m", opts.mesh_path, "space-time mesh file")->required();
  slice->add_option("--config,-c", opts.config_path, "run configuration file");
  slice->add_option("--out,-o", opts.out_dir, "output directory");
  slice->add_option("--slices", opts.slices, "comma separated slice times");

  auto* solve = app.add_subcommand("solve", "extrude, assemble and solve");
  add_mesh_option(solve, opts, /*required=*/false);
  solve->add_option("--config,-c", opts.config_path, "run configuration file");
  solve->add_option("--out,-o", opts.out_dir, "output directory");
  solve->add_option("--slices", opts.slices, "comma separated slice times");
  solve->add_option("--tol", opts.tol, "GMRES relative tolerance");
  solve->add_option("--sigma-u", opts.sigma_u, "velocity penalty");
  solve->add_option("--sigma-p", opts.sigma_p, "pressure penalty");

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) return cmd_info(opts);
    if (check->parsed()) return cmd_check(opts);
    if (extrude->parsed()) return cmd_extrude(opts, extrude_out);
    if (slice->parsed()) return cmd_slice(opts);
    if (solve->parsed()) return cmd_solve(opts);
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return kExitParse;
  } catch (const ConsistencyError& err) {
    std::cerr << "consistency error: " << err.what() << "\n";
    return kExitConsistency;
  } catch (const AdmissibilityError& err) {
    std::cerr << "admissibility error: " << err.what() << "\n";
    return kExitAdmissibility;
  } catch (const DegenerateElementError& err) {
    std::cerr << "degenerate element: " << err.what() << "\n";
    return kExitDegenerate;
  } catch (const SolverError& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
