#include <benchmark/benchmark.h>

#include "mipt/doubled.hpp"
#include "mipt/trajectories.hpp"

using namespace mipt;

namespace {

struct Bench {
  FockBasis basis = build_basis(6, 3);
  Matrix h = build_hamiltonian(basis, {.j_hop = 1.0, .u_int = 1.0});
  JumpOperatorSet jumps = build_jump_operators(basis);
  Vector psi0 = parse_product_state("000111", basis);
  Matrix rho0 = psi0 * psi0.adjoint();
};

void BM_rhs_complete(benchmark::State& state) {
  Bench b;
  Matrix rho = b.rho0;
  for (auto _ : state)
    benchmark::DoNotOptimize(rhs_complete(b.h, b.jumps, 5.0, rho));
}
BENCHMARK(BM_rhs_complete);

void BM_rhs_doubled_generic(benchmark::State& state) {
  Bench b;
  const Matrix hd = doubled_hamiltonian(b.h);
  const Matrix rho_d = tensor_square(b.rho0);
  for (auto _ : state)
    benchmark::DoNotOptimize(rhs_doubled(hd, b.jumps, 5.0, rho_d));
}
BENCHMARK(BM_rhs_doubled_generic);

// full RK4 steps of the optimized doubled engine, measured through a short
// evolution (includes the emission overhead once per run)
void BM_evolve_doubled_steps(benchmark::State& state) {
  Bench b;
  EvolutionConfig cfg;
  cfg.t_total = 30.0 * 20 / 11000;
  cfg.n_steps = 20;
  cfg.measurement_rate = 5.0;
  cfg.check_every = 0;
  for (auto _ : state) {
    const auto result =
        evolve_doubled(b.h, b.jumps, b.basis, cfg, b.rho0, SubsystemMask{3});
    benchmark::DoNotOptimize(result.entropies[0].back());
  }
  state.SetItemsProcessed(state.iterations() * cfg.n_steps);
}
BENCHMARK(BM_evolve_doubled_steps)->Unit(benchmark::kMillisecond);

void BM_swap_entropy(benchmark::State& state) {
  Bench b;
  const Matrix rho_d = tensor_square(b.rho0);
  for (auto _ : state)
    benchmark::DoNotOptimize(swap_renyi_entropy(rho_d, b.basis, {3}));
}
BENCHMARK(BM_swap_entropy);

void BM_trajectory_step(benchmark::State& state) {
  Bench b;
  TrajectoryStepper stepper(b.h, b.jumps, 1.0, TrajectoryForm::single_copy);
  Rng rng(1);
  Vector phi = b.psi0;
  const double dt = 30.0 / 11000;
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(phi, dt, rng));
}
BENCHMARK(BM_trajectory_step);

}  // namespace

BENCHMARK_MAIN();
