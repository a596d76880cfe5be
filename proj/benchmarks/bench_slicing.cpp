#include <benchmark/benchmark.h>

#include "stmesh/builtin_meshes.hpp"
#include "stmesh/extrusion.hpp"
#include "stmesh/slicing.hpp"

using namespace stmesh;

static void BM_SliceCube(benchmark::State& state) {
  SpatialMesh mesh = unit_cube_mesh(static_cast<int>(state.range(0)));
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.25, 0.5, 0.75, 1.0});
  double t = 0.11;
  for (auto _ : state) {
    SliceComplex slice = slice_mesh(st, t);
    benchmark::DoNotOptimize(slice.cells.size());
    t += 0.04;
    if (t > 0.95) t = 0.11;
  }
  state.SetItemsProcessed(state.iterations() * st.num_elements());
}
BENCHMARK(BM_SliceCube)->Arg(4)->Arg(8);
