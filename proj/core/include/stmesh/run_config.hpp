#ifndef STMESH_RUN_CONFIG_HPP
#define STMESH_RUN_CONFIG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "stmesh/stokes.hpp"

namespace stmesh {

// Declarative run description, parsed from `key = value` lines (# comments).
// Command-line flags may override individual fields after parsing.
struct RunConfig {
  // Time partition: K uniform slabs over [0, T], or explicit levels.
  double T = 1.0;
  int slabs = 4;
  std::vector<double> levels;

  // Motion: none | pump | ypipe.
  std::string motion = "none";
  double motion_amplitude = 1.0;
  double membrane_radius = 0.75;
  bool pump_z_only = false;
  std::string smoothing = "laplacian";  // laplacian | boundary

  // Problem: none | manufactured | pump | ypipe.
  std::string problem = "none";
  double nu = 1.0;
  int manufactured_cells = 8;  // base mesh for the manufactured case
  int refinements = 0;         // extra uniform refinements for the error sweep

  SolverConfig solver;

  std::string out_dir = ".";
  std::vector<double> slice_times;
  bool export_matrices = false;
  bool check_input = true;

  std::vector<double> time_partition() const;
  void validate() const;
};

RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);

}  // namespace stmesh

#endif
