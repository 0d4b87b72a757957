#include "rabisim/trajectories.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rabisim/rng.hpp"
#include "ensemble_accum.hpp"

namespace rabisim {

void TrajectoryCfg::validate() const {
    grid.validate();
    if (n_traj < 1) throw ConfigError("TrajectoryCfg: n_traj must be >= 1");
}

namespace {

constexpr double kNormDriftTol = 1e-6;
constexpr double kJumpNormTol = 1e-14;
// Renormalization cadence: long gaps between samples or jumps are chunked so
// integrator norm drift is reset well before the 1e-6 guard can trip.
constexpr double kMaxLegSpan = 10.0;

struct SchroedingerRhs {
    const SparseMatrix& h;
    void operator()(const Vector& psi, Vector& out) const {
        out.noalias() = h * psi;
        out *= Complex(0.0, -1.0);
    }
};

// Shared MCWF walk. sample_sink(k, psi_normalized, norm_drift) fires at grid
// times; jump times land in jump_times when requested.
void trajectory_scan(const Vector& psi0, const QOperator& hamiltonian, double gamma_ph,
                     const TimeGrid& grid, std::uint64_t seed, const IntegratorCfg& cfg,
                     const std::function<void(int, const Vector&, double)>& sample_sink,
                     std::vector<double>* jump_times) {
    if (gamma_ph < 0.0) throw ConfigError("run_trajectory: gamma_ph must be >= 0");
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("run_trajectory: psi0 must be unit norm");
    }
    grid.validate();

    const SparseMatrix h = hamiltonian.elements.sparseView();
    SchroedingerRhs rhs{h};
    const int nf = hamiltonian.space.fock_levels();

    Rng rng(seed);
    Vector psi = psi0;
    double t = 0.0;
    double next_jump = gamma_ph > 0.0 ? rng.exponential(gamma_ph)
                                      : std::numeric_limits<double>::infinity();

    IntegratorCfg leg_cfg = cfg;
    const std::vector<double> times = grid.sample_times();
    sample_sink(0, psi, std::abs(psi.squaredNorm() - 1.0));

    auto check_drift_and_renormalize = [&](double at) {
        const double drift = std::abs(psi.squaredNorm() - 1.0);
        if (drift > kNormDriftTol) {
            std::ostringstream msg;
            msg << "trajectory norm drift " << drift << " at t=" << at << " exceeds "
                << kNormDriftTol;
            throw NumericalError(msg.str());
        }
        psi /= psi.norm();
        return drift;
    };

    auto integrate_leg = [&](double t_to) {
        while (t_to - t > kMaxLegSpan) {
            const double span[2] = {t, t + kMaxLegSpan};
            leg_cfg.init_step = integrate_to_samples(
                rhs, psi, std::span<const double>(span, 2), leg_cfg,
                [](int, double, const Vector&) {});
            t += kMaxLegSpan;
            check_drift_and_renormalize(t);
        }
        if (t_to <= t) return;
        const double span[2] = {t, t_to};
        leg_cfg.init_step = integrate_to_samples(rhs, psi, std::span<const double>(span, 2),
                                                 leg_cfg, [](int, double, const Vector&) {});
        t = t_to;
    };

    for (int k = 1; k < grid.n_samples; ++k) {
        const double t_sample = times[k];
        while (next_jump < t_sample) {
            integrate_leg(next_jump);
            // jump: apply sigma_z (sign flip of the ground block); the rescaling
            // in the jump operator is absorbed by normalization
            const double norm_before = psi.norm();
            psi.head(nf) = -psi.head(nf);
            const double norm_after = psi.norm();
            if (std::abs(norm_after - norm_before) > kJumpNormTol) {
                throw NumericalError("sigma_z jump changed the norm by " +
                                     std::to_string(norm_after - norm_before));
            }
            if (jump_times) jump_times->push_back(next_jump);
            check_drift_and_renormalize(next_jump);
            next_jump += rng.exponential(gamma_ph);
        }
        integrate_leg(t_sample);
        const double drift = check_drift_and_renormalize(t_sample);
        sample_sink(k, psi, drift);
    }
}

} // namespace

TrajectoryResult run_trajectory(const Vector& psi0, const QOperator& hamiltonian,
                                double gamma_ph, const TimeGrid& grid,
                                std::uint64_t seed, const IntegratorCfg& cfg) {
    ObservableSet set(hamiltonian.space, hamiltonian);
    TrajectoryResult result;
    result.series.rows.reserve(grid.n_samples);
    trajectory_scan(psi0, hamiltonian, gamma_ph, grid, seed, cfg,
                    [&](int k, const Vector& psi, double drift) {
                        ObservableRecord rec = set.record(psi, grid.t(k), grid.tau(k));
                        rec.trace_error = drift;  // pre-renormalization deviation
                        result.series.rows.push_back(rec);
                    },
                    &result.jump_times);
    return result;
}

EnsembleSeries average_trajectories(const Vector& psi0, const QOperator& hamiltonian,
                                    double gamma_ph, const TrajectoryCfg& cfg) {
    cfg.validate();
    ObservableSet set(hamiltonian.space, hamiltonian);

    std::vector<double> ts = cfg.grid.sample_times();
    std::vector<double> taus(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) taus[k] = cfg.grid.xi * ts[k];

    return detail::ensemble_reduce(
        ts, taus, cfg.n_traj, cfg.threads,
        [&](int i, const std::function<void(int, const RawMoments&)>& sink) {
            const std::uint64_t seed = derive_stream_seed(cfg.master_seed, i);
            trajectory_scan(psi0, hamiltonian, gamma_ph, cfg.grid, seed, cfg.integrator,
                            [&](int k, const Vector& psi, double drift) {
                                RawMoments m = set.raw(psi);
                                m.norm_err = drift;
                                sink(k, m);
                            },
                            nullptr);
        });
}

} // namespace rabisim
