#ifndef RABISIM_NOISE_HPP
#define RABISIM_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rabisim/series_io.hpp"
#include "rabisim/trajectories.hpp"

namespace rabisim {

/// Random-walk model for the atomic transition frequency. Per unit step dt,
///   w0 <- w0 + 0.1 eps x r             if w0 < Omega0 - 0.8 eps
///   w0 <- w0 - 0.1 eps x r             if w0 > Omega0 + 0.8 eps
///   w0 <- w0 + 0.1 eps x (r - 1/2)     otherwise,
/// with r drawn uniformly from (-1,1). `x` sets the noise frequency content.
struct NoiseCfg {
    double Omega0 = 1.0;   // mean atomic frequency, w0(0)
    double epsilon = 0.0;  // maximum shift scale
    double x = 1.0;        // noise-frequency knob
    double dt = 0.05;      // simulation unit step
    double t_end = 500.0;
    int n_runs = 500;
    std::uint64_t master_seed = 0;
    int sample_stride = 0;          // 0 = choose automatically (~250 samples)
    bool outer_branch_abs_r = false; // interpretation toggle: |r| in the outer branches
    int threads = 0;

    int n_steps() const;
    int resolved_stride() const;
    void validate() const;
    /// g*dt <= 1e-2 is enforced; a non-fatal warning is returned when the
    /// shift scale is not small against the mean frequency.
    std::string validate_with(const SimParams& params) const;
};

double noise_step(double omega0_t, const NoiseCfg& cfg, double r);

struct NoisePath {
    std::vector<double> t;
    std::vector<double> omega0;
};

/// Path of n_steps updates starting at Omega0; deterministic in the seed.
NoisePath generate_noise_path(const NoiseCfg& cfg, std::uint64_t seed);

/// Ensemble-averaged magnitude of the unitary DFT of omega0(t) - Omega0.
/// Frequencies are angular, nu_k = 2 pi k / (N dt), full two-sided range.
SpectrumSeries noise_spectrum(const std::vector<NoisePath>& paths);

/// Unitary pure-state evolution under the Rabi Hamiltonian with omega0 frozen
/// to omega0(t) on each dt segment; each segment applies the exact matrix
/// exponential via a truncated Taylor expansion of exp(-iH dt), which keeps
/// the norm to machine precision. Norm drift beyond 1e-8 raises NumericalError.
/// The mean frequency of the walk is params.omega0 (cfg.Omega0 only matters
/// for standalone path generation).
ObservableSeries evolve_stochastic(const Vector& psi0, const SimParams& params,
                                   const NoiseCfg& cfg, std::uint64_t seed,
                                   const HilbertSpace& space);

/// Mean/stderr over cfg.n_runs runs with the same deterministic block
/// reduction contract as average_trajectories.
EnsembleSeries ensemble_average_stochastic(const Vector& psi0, const SimParams& params,
                                           const NoiseCfg& cfg, const HilbertSpace& space);

} // namespace rabisim

#endif
