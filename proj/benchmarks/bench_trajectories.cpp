#include <benchmark/benchmark.h>

#include "rabisim/rng.hpp"
#include "rabisim/trajectories.hpp"

using namespace rabisim;

namespace {

void bm_single_trajectory(benchmark::State& state) {
    const auto space = build_space(static_cast<int>(state.range(0)));
    SimParams p;
    p.g = 0.1;
    p.gamma_ph = 0.1;
    const auto h = rabi_hamiltonian(p, space);
    const Vector psi0 = prepare_state(StateSpec::fock(StateSpec::Atom::ground, 5), space);
    const TimeGrid grid{100.0, 101, 0.1};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto result = run_trajectory(psi0, h, p.gamma_ph, grid, ++seed);
        benchmark::DoNotOptimize(result.series.rows.data());
    }
}

void bm_exponential_sampling(benchmark::State& state) {
    Rng rng(7);
    double acc = 0.0;
    for (auto _ : state) {
        acc += rng.exponential(0.1);
        benchmark::DoNotOptimize(acc);
    }
}

} // namespace

BENCHMARK(bm_single_trajectory)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_exponential_sampling);
