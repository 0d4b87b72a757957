#ifndef RABISIM_TRAJECTORIES_HPP
#define RABISIM_TRAJECTORIES_HPP

#include <cstdint>
#include <vector>

#include "rabisim/master_equation.hpp"

namespace rabisim {

/// Pure-state integration has no positivity floor to protect and the walk is
/// renormalized at every sample, so trajectories default to looser tolerances
/// than the density-matrix path (norm drift stays well under the 1e-6 guard).
inline IntegratorCfg trajectory_integrator_defaults() {
    IntegratorCfg cfg;
    cfg.atol = 1e-10;
    cfg.rtol = 1e-7;
    return cfg;
}

struct TrajectoryCfg {
    std::uint64_t master_seed = 0;
    int n_traj = 1;
    TimeGrid grid;
    IntegratorCfg integrator = trajectory_integrator_defaults();
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct TrajectoryResult {
    ObservableSeries series;
    std::vector<double> jump_times;
};

/// One quantum trajectory of the pure-dephasing unraveling. The jump operator
/// is proportional to sigma_z, whose square is the identity, so jump waiting
/// times are exactly exponential with rate gamma_ph and the state between
/// jumps evolves unitarily under H (the anti-Hermitian part of the effective
/// Hamiltonian is a multiple of the identity and cancels on normalization).
/// Waiting times are sampled directly; sigma_z is applied at each jump.
TrajectoryResult run_trajectory(const Vector& psi0, const QOperator& hamiltonian,
                                double gamma_ph, const TimeGrid& grid,
                                std::uint64_t seed,
                                const IntegratorCfg& cfg = trajectory_integrator_defaults());

struct EnsembleSeries {
    ObservableSeries mean;
    ObservableSeries stderror;  // per-field standard error; q left absent
};

/// Pointwise ensemble mean and standard error over cfg.n_traj trajectories.
/// Trajectory i runs on the stream derive_stream_seed(master_seed, i); partial
/// sums are accumulated in fixed-size index blocks and reduced in block order,
/// so the result is bitwise independent of the thread count.
EnsembleSeries average_trajectories(const Vector& psi0, const QOperator& hamiltonian,
                                    double gamma_ph, const TrajectoryCfg& cfg);

} // namespace rabisim

#endif
