#include <benchmark/benchmark.h>

#include "stmesh/builtin_meshes.hpp"
#include "stmesh/extrusion.hpp"
#include "stmesh/solver.hpp"

using namespace stmesh;

static void BM_AssembleBlockSystem(benchmark::State& state) {
  SpatialMesh mesh = unit_square_mesh(static_cast<int>(state.range(0)));
  std::vector<double> partition = {0.0, 0.25, 0.5, 0.75, 1.0};
  SpaceTimeMesh st = extrude_multi(mesh, partition);
  SolverConfig config;
  ProblemData data;
  data.g_D = [](const Point&) { return Point::Zero(); };
  for (auto _ : state) {
    StokesAssembler assembler(st, config);
    BlockSystem sys = assembler.build_block_system(data);
    benchmark::DoNotOptimize(sys.K.nonZeros());
  }
  state.SetItemsProcessed(state.iterations() * st.num_elements());
}
BENCHMARK(BM_AssembleBlockSystem)->Arg(4)->Arg(8);

static void BM_GmresSolve(benchmark::State& state) {
  SpatialMesh mesh = unit_square_mesh(static_cast<int>(state.range(0)));
  SpaceTimeMesh st = extrude_multi(mesh, {0.0, 0.25, 0.5, 0.75, 1.0});
  SolverConfig config;
  ProblemData data;
  Point c = Point::Zero();
  c[0] = 1.0;
  data.g_D = [c](const Point&) { return c; };
  data.u0 = [c](const Point&) { return c; };
  StokesAssembler assembler(st, config);
  BlockSystem sys = assembler.build_block_system(data);
  for (auto _ : state) {
    SolveResult result = gmres_solve(sys, config);
    benchmark::DoNotOptimize(result.iterations);
  }
}
BENCHMARK(BM_GmresSolve)->Arg(4);
