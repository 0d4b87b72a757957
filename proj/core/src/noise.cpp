#include "rabisim/noise.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "rabisim/rng.hpp"
#include "ensemble_accum.hpp"

namespace rabisim {

int NoiseCfg::n_steps() const { return static_cast<int>(std::lround(t_end / dt)); }

int NoiseCfg::resolved_stride() const {
    if (sample_stride > 0) return sample_stride;
    return std::max(1, n_steps() / 250);
}

void NoiseCfg::validate() const {
    // zero is allowed for both knobs and freezes the walk, matching the
    // x -> 0 / epsilon -> 0 limits
    if (epsilon < 0.0) throw ConfigError("NoiseCfg: epsilon must be >= 0");
    if (x < 0.0) throw ConfigError("NoiseCfg: x must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("NoiseCfg: dt must be > 0");
    if (!(t_end > 0.0) || n_steps() < 1) throw ConfigError("NoiseCfg: t_end must cover at least one step");
    if (n_runs < 1) throw ConfigError("NoiseCfg: n_runs must be >= 1");
    if (sample_stride < 0) throw ConfigError("NoiseCfg: sample_stride must be >= 0");
}

std::string NoiseCfg::validate_with(const SimParams& params) const {
    validate();
    params.validate();
    if (params.g * dt > 1e-2) {
        std::ostringstream msg;
        msg << "NoiseCfg: g*dt = " << params.g * dt
            << " violates the unit-step requirement g*dt <= 1e-2";
        throw ConfigError(msg.str());
    }
    if (epsilon >= 0.1 * Omega0) {
        std::ostringstream warn;
        warn << "noise shift scale epsilon=" << epsilon
             << " is not small against Omega0=" << Omega0
             << "; the random-walk dephasing model assumes epsilon << Omega0";
        return warn.str();
    }
    return {};
}

double noise_step(double omega0_t, const NoiseCfg& cfg, double r) {
    const double kick = 0.1 * cfg.epsilon * cfg.x;
    const double r_out = cfg.outer_branch_abs_r ? std::abs(r) : r;
    if (omega0_t < cfg.Omega0 - 0.8 * cfg.epsilon) return omega0_t + kick * r_out;
    if (omega0_t > cfg.Omega0 + 0.8 * cfg.epsilon) return omega0_t - kick * r_out;
    return omega0_t + kick * (r - 0.5);
}

NoisePath generate_noise_path(const NoiseCfg& cfg, std::uint64_t seed) {
    cfg.validate();
    const int n = cfg.n_steps();
    NoisePath path;
    path.t.resize(n + 1);
    path.omega0.resize(n + 1);
    Rng rng(seed);
    path.t[0] = 0.0;
    path.omega0[0] = cfg.Omega0;
    for (int k = 0; k < n; ++k) {
        path.t[k + 1] = (k + 1) * cfg.dt;
        path.omega0[k + 1] = noise_step(path.omega0[k], cfg, rng.uniform_symmetric());
    }
    return path;
}

namespace {

std::mutex fftw_plan_mutex;

} // namespace

SpectrumSeries noise_spectrum(const std::vector<NoisePath>& paths) {
    if (paths.empty()) throw std::invalid_argument("noise_spectrum: empty ensemble");
    const std::size_t n = paths.front().omega0.size();
    if (n < 2) throw std::invalid_argument("noise_spectrum: paths too short");
    for (const auto& p : paths) {
        if (p.omega0.size() != n) {
            throw std::invalid_argument("noise_spectrum: paths of unequal length");
        }
    }
    const double dt = paths.front().t[1] - paths.front().t[0];

    std::vector<Complex> in(n), out(n);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }

    SpectrumSeries spectrum;
    spectrum.nu.resize(n);
    spectrum.magnitude.assign(n, 0.0);
    const double unitary = 1.0 / std::sqrt(static_cast<double>(n));
    for (const auto& path : paths) {
        const double base = path.omega0.front();  // Omega0 by construction
        for (std::size_t k = 0; k < n; ++k) in[k] = path.omega0[k] - base;
        fftw_execute(plan);
        for (std::size_t k = 0; k < n; ++k) {
            spectrum.magnitude[k] += std::abs(out[k]) * unitary;
        }
    }
    {
        std::lock_guard lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    const double inv_runs = 1.0 / static_cast<double>(paths.size());
    for (std::size_t k = 0; k < n; ++k) {
        spectrum.magnitude[k] *= inv_runs;
        spectrum.nu[k] = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         (static_cast<double>(n) * dt);
    }
    return spectrum;
}

namespace {

constexpr double kUnitarityTol = 1e-8;

// Propagator for one piecewise-constant segment: psi <- exp(-i H dt) psi with
// H = H0 + (w/2) sz, applied as a scaled truncated Taylor series. H is split
// so the noise only rescales a precomputed diagonal; nothing is refactored
// per step. The series is run to machine precision, so each segment is
// unitary up to rounding.
class SegmentPropagator {
public:
    SegmentPropagator(const SparseMatrix& h0, RealVector sz_half_diag, double h0_norm1)
        : h0_(h0), sz_half_(std::move(sz_half_diag)), h0_norm1_(h0_norm1) {
        term_.resize(h0_.rows());
        next_.resize(h0_.rows());
    }

    void apply(Vector& psi, double w, double dt) const {
        const double bound = dt * (h0_norm1_ + 0.5 * std::abs(w));
        const int m = std::max(1, static_cast<int>(std::ceil(bound)));
        const double sub = dt / static_cast<double>(m);
        for (int rep = 0; rep < m; ++rep) {
            term_ = psi;
            double psi_norm = psi.norm();
            for (int j = 1; j <= 48; ++j) {
                next_.noalias() = h0_ * term_;
                next_.array() += w * sz_half_.array() * term_.array();
                term_ = (Complex(0.0, -sub) / double(j)) * next_;
                psi += term_;
                if (term_.norm() <= 1e-16 * psi_norm) break;
            }
        }
    }

private:
    const SparseMatrix h0_;
    const RealVector sz_half_;
    const double h0_norm1_;
    mutable Vector term_, next_;
};

void stochastic_scan(const Vector& psi0, const SimParams& params, const NoiseCfg& cfg,
                     std::uint64_t seed, const HilbertSpace& space,
                     const std::function<void(int, const Vector&, double)>& sample_sink) {
    cfg.validate_with(params);
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve_stochastic: psi0 must be unit norm");
    }

    // Rabi Hamiltonian with the omega0 term removed; the noise path provides it
    SimParams base = params;
    base.omega0 = 0.0;
    const QOperator h0_op = rabi_hamiltonian(base, space);
    const SparseMatrix h0 = h0_op.elements.sparseView();
    const double h0_norm1 = h0_op.elements.cwiseAbs().colwise().sum().maxCoeff();

    RealVector sz_half(space.dim);
    for (int s = 0; s < 2; ++s) {
        for (int n = 0; n < space.fock_levels(); ++n) {
            sz_half(space.index(s, n)) = s == 0 ? -0.5 : 0.5;
        }
    }

    NoiseCfg path_cfg = cfg;
    path_cfg.Omega0 = params.omega0;  // the mean frequency is the params value
    const NoisePath path = generate_noise_path(path_cfg, seed);

    SegmentPropagator prop(h0, sz_half, h0_norm1);
    Vector psi = psi0;
    const int stride = cfg.resolved_stride();
    const int n = cfg.n_steps();

    sample_sink(0, psi, path.omega0[0]);
    int sample_idx = 1;
    for (int k = 0; k < n; ++k) {
        prop.apply(psi, path.omega0[k], cfg.dt);
        if ((k + 1) % stride == 0 || k + 1 == n) {
            const double drift = std::abs(psi.norm() - 1.0);
            if (drift > kUnitarityTol) {
                std::ostringstream msg;
                msg << "stochastic run norm drift " << drift << " at t="
                    << path.t[k + 1] << " exceeds " << kUnitarityTol;
                throw NumericalError(msg.str());
            }
            sample_sink(sample_idx++, psi, path.omega0[k + 1]);
        }
    }
}

std::vector<double> stochastic_sample_times(const NoiseCfg& cfg) {
    const int stride = cfg.resolved_stride();
    const int n = cfg.n_steps();
    std::vector<double> ts{0.0};
    for (int k = 0; k < n; ++k) {
        if ((k + 1) % stride == 0 || k + 1 == n) ts.push_back((k + 1) * cfg.dt);
    }
    return ts;
}

} // namespace

ObservableSeries evolve_stochastic(const Vector& psi0, const SimParams& params,
                                   const NoiseCfg& cfg, std::uint64_t seed,
                                   const HilbertSpace& space) {
    const QOperator h_mean = rabi_hamiltonian(params, space);
    ObservableSet set(space, h_mean);

    const std::vector<double> ts = stochastic_sample_times(cfg);
    ObservableSeries series;
    series.rows.reserve(ts.size());
    stochastic_scan(psi0, params, cfg, seed, space,
                    [&](int k, const Vector& psi, double w) {
                        RawMoments m = set.raw(psi);
                        // instantaneous energy: correct the mean-H value by the
                        // current frequency shift
                        m.energy += 0.5 * (w - params.omega0) * m.sz;
                        series.rows.push_back(ObservableSet::from_moments(m, ts[k], ts[k]));
                    });
    return series;
}

EnsembleSeries ensemble_average_stochastic(const Vector& psi0, const SimParams& params,
                                           const NoiseCfg& cfg, const HilbertSpace& space) {
    cfg.validate_with(params);
    const QOperator h_mean = rabi_hamiltonian(params, space);
    ObservableSet set(space, h_mean);

    const std::vector<double> ts = stochastic_sample_times(cfg);
    return detail::ensemble_reduce(
        ts, ts, cfg.n_runs, cfg.threads,
        [&](int i, const std::function<void(int, const RawMoments&)>& sink) {
            const std::uint64_t seed = derive_stream_seed(cfg.master_seed, i);
            stochastic_scan(psi0, params, cfg, seed, space,
                            [&](int k, const Vector& psi, double w) {
                                RawMoments m = set.raw(psi);
                                m.energy += 0.5 * (w - params.omega0) * m.sz;
                                sink(k, m);
                            });
        });
}

} // namespace rabisim
