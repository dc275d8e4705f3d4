#include "phmoc/adaptation.hpp"
#include "phmoc/moc.hpp"
#include "phmoc/riccati.hpp"
#include "phmoc/scenario_io.hpp"
#include "phmoc/simulate.hpp"

#include <benchmark/benchmark.h>

using namespace phmoc;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

struct Fixture {
  PhsSystem sys = nonlinear_example_system();
  ExtendedClf clf{sys, quadratic_2d_basis()};
  ShiftSet shifts;
  Vector x = vec2(0.8, -0.4);
  Vector w = (Vector(3) << 0.9, -0.1, 0.3).finished();

  Fixture() {
    shifts.shifts = {vec2(0, 0), vec2(-1, 0), vec2(0, -1), vec2(1, -1)};
    shifts.learning_rate = 0.02;
  }
};

void BM_MocScalars(benchmark::State& state) {
  Fixture f;
  for (auto _ : state) benchmark::DoNotOptimize(moc_scalars(f.sys, f.clf, f.x, f.w));
}
BENCHMARK(BM_MocScalars);

void BM_ControlLaw(benchmark::State& state) {
  Fixture f;
  for (auto _ : state) benchmark::DoNotOptimize(control(f.sys, f.clf, f.x, f.w));
}
BENCHMARK(BM_ControlLaw);

void BM_QuadricAt(benchmark::State& state) {
  Fixture f;
  for (auto _ : state) benchmark::DoNotOptimize(quadric_at(f.sys, f.clf, f.x));
}
BENCHMARK(BM_QuadricAt);

void BM_JwGradient(benchmark::State& state) {
  Fixture f;
  for (auto _ : state)
    benchmark::DoNotOptimize(jw_gradient(f.sys, f.clf, f.shifts, f.x, f.w));
}
BENCHMARK(BM_JwGradient);

void BM_SimulateSecond(benchmark::State& state) {
  ScenarioDoc doc = builtin_scenario("nonlinear-example");
  doc.horizon = 1.0;
  doc.disturbances.clear();
  Scenario scn = build_scenario(doc);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(scn));
}
BENCHMARK(BM_SimulateSecond)->Unit(benchmark::kMillisecond);

void BM_SolveRiccati(benchmark::State& state) {
  Matrix A = (Matrix(2, 2) << -1, -1, 1, -1).finished();
  Matrix B = (Matrix(2, 1) << 1, 0).finished();
  Matrix Q = (Matrix(2, 2) << 100, 0, 0, 1).finished();
  Matrix S = Matrix::Identity(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_riccati(A, B, Q, S));
}
BENCHMARK(BM_SolveRiccati);

}  // namespace

BENCHMARK_MAIN();
