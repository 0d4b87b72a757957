#include <benchmark/benchmark.h>

#include "rabisim/noise.hpp"

using namespace rabisim;

namespace {

NoiseCfg bench_cfg() {
    NoiseCfg cfg;
    cfg.Omega0 = 1.0;
    cfg.epsilon = 0.06;
    cfg.x = 6.0;
    cfg.dt = 0.05;
    cfg.t_end = 100.0;
    return cfg;
}

void bm_noise_path(benchmark::State& state) {
    NoiseCfg cfg = bench_cfg();
    cfg.t_end = 500.0;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto path = generate_noise_path(cfg, ++seed);
        benchmark::DoNotOptimize(path.omega0.data());
    }
}

void bm_stochastic_run(benchmark::State& state) {
    const auto space = build_space(static_cast<int>(state.range(0)));
    SimParams p;
    p.g = 0.06;
    const NoiseCfg cfg = bench_cfg();
    const Vector psi0 = prepare_state(StateSpec{}, space);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto series = evolve_stochastic(psi0, p, cfg, ++seed, space);
        benchmark::DoNotOptimize(series.rows.data());
    }
}

void bm_spectrum(benchmark::State& state) {
    NoiseCfg cfg = bench_cfg();
    cfg.t_end = 500.0;
    std::vector<NoisePath> paths;
    for (int i = 0; i < 16; ++i) paths.push_back(generate_noise_path(cfg, i));
    for (auto _ : state) {
        auto spec = noise_spectrum(paths);
        benchmark::DoNotOptimize(spec.magnitude.data());
    }
}

} // namespace

BENCHMARK(bm_noise_path);
BENCHMARK(bm_stochastic_run)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_spectrum)->Unit(benchmark::kMillisecond);
