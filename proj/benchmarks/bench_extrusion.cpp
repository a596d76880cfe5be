#include <benchmark/benchmark.h>

#include "stmesh/admissibility.hpp"
#include "stmesh/builtin_meshes.hpp"
#include "stmesh/extrusion.hpp"

using namespace stmesh;

static void BM_ExtrudeCube(benchmark::State& state) {
  SpatialMesh mesh = unit_cube_mesh(static_cast<int>(state.range(0)));
  std::vector<double> partition = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (auto _ : state) {
    SpaceTimeMesh st = extrude_multi(mesh, partition);
    benchmark::DoNotOptimize(st.num_elements());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_elements() * 4 * 4);
}
BENCHMARK(BM_ExtrudeCube)->Arg(4)->Arg(8);

static void BM_CheckAdmissible4d(benchmark::State& state) {
  SpatialMesh mesh = unit_cube_mesh(static_cast<int>(state.range(0)));
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.5, 1.0});
  for (auto _ : state) {
    AdmissibilityReport report = check_admissible(st);
    benchmark::DoNotOptimize(report.violations.size());
  }
  state.SetItemsProcessed(state.iterations() * st.num_elements());
}
BENCHMARK(BM_CheckAdmissible4d)->Arg(3)->Arg(5);
