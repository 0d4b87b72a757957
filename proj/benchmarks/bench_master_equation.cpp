#include <benchmark/benchmark.h>

#include "rabisim/master_equation.hpp"

using namespace rabisim;

namespace {

SimParams fig1_params() {
    SimParams p;
    p.g = 0.1;
    p.gamma_ph = 0.1;
    return p;
}

void bm_lindblad_rhs(benchmark::State& state) {
    const auto space = build_space(static_cast<int>(state.range(0)));
    const SimParams p = fig1_params();
    const auto h = rabi_hamiltonian(p, space);
    const LindbladEvaluator rhs(h, p);
    const Matrix rho =
        DensityMatrix::pure(space, prepare_state(StateSpec{}, space)).rho;
    Matrix out(space.dim, space.dim);
    for (auto _ : state) {
        rhs(rho, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_evolve_short(benchmark::State& state) {
    const auto space = build_space(static_cast<int>(state.range(0)));
    const SimParams p = fig1_params();
    const auto h = rabi_hamiltonian(p, space);
    const DensityMatrix rho0 =
        DensityMatrix::pure(space, prepare_state(StateSpec{}, space));
    const TimeGrid grid{10.0, 11, 0.1};
    for (auto _ : state) {
        auto result = evolve(rho0, h, p, grid);
        benchmark::DoNotOptimize(result.series.rows.data());
    }
}

} // namespace

BENCHMARK(bm_lindblad_rhs)->Arg(15)->Arg(30);
BENCHMARK(bm_evolve_short)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);
