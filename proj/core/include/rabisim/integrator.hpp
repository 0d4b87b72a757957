#ifndef RABISIM_INTEGRATOR_HPP
#define RABISIM_INTEGRATOR_HPP

#include <algorithm>
#include <cmath>
#include <span>

#include "rabisim/types.hpp"

namespace rabisim {

/// Tolerances and guards for the adaptive embedded Runge-Kutta 4(5) scheme.
/// Defaults are set so the accumulated eigenvalue noise of a long run stays
/// well under the -1e-8 positivity floor of DensityMatrix; density-matrix
/// steps are usually limited by the sampling grid anyway, so the tight
/// tolerances cost little.
struct IntegratorCfg {
    double atol = 1e-12;
    double rtol = 1e-9;
    double init_step = 0.0;          // 0 = choose automatically
    double max_step = 0.0;           // 0 = unlimited
    double min_step_floor = 1e-13;   // relative to max(1,|t|); below -> StepSizeError
    long long max_steps = 200'000'000;
    double trunc_tol = 1e-6;         // Fock-truncation guard used by evolve()
};

namespace detail {

// rms of |err_i| / (atol + rtol*max(|y0_i|,|y1_i|)) over all elements
template <class State>
double scaled_error_norm(const State& y0, const State& y1, const State& err,
                         double atol, double rtol) {
    const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
    const double sq = (err.cwiseAbs().array() / scale).square().sum();
    return std::sqrt(sq / static_cast<double>(err.size()));
}

template <class State>
double scaled_rms(const State& v, const State& ref, double atol, double rtol) {
    const auto scale = (atol + rtol * ref.cwiseAbs().array()).eval();
    const double sq = (v.cwiseAbs().array() / scale).square().sum();
    return std::sqrt(sq / static_cast<double>(v.size()));
}

} // namespace detail

/// Dormand-Prince 5(4) with FSAL and standard step-size control.
/// Rhs signature: void(const State& y, State& dydt).
/// The optional on_accept hook may adjust the state after each accepted step
/// (used for re-symmetrizing density matrices).
/// Returns the last adapted step size, reusable as init_step of a follow-up
/// segment of the same problem.
template <class State, class Rhs, class SampleCb, class AcceptCb>
double integrate_to_samples(Rhs&& rhs, State& y, std::span<const double> times,
                            const IntegratorCfg& cfg, SampleCb&& on_sample,
                            AcceptCb&& on_accept) {
    if (times.empty()) return cfg.init_step;

    // Butcher tableau
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = times.front();
    on_sample(0, t, y);

    State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y;
    State ytmp = y, ynew = y, yerr = y;
    rhs(y, k1);

    // initial step selection (Hairer-Norsett-Wanner heuristic)
    double h = cfg.init_step;
    if (h <= 0.0) {
        const double d0 = detail::scaled_rms(y, y, cfg.atol, cfg.rtol);
        const double d1 = detail::scaled_rms(k1, y, cfg.atol, cfg.rtol);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        ytmp = y + h0 * k1;
        rhs(ytmp, k2);
        yerr = k2 - k1;
        const double d2 = detail::scaled_rms(yerr, y, cfg.atol, cfg.rtol) / h0;
        double h1;
        if (std::max(d1, d2) <= 1e-15) {
            h1 = std::max(1e-6, h0 * 1e-3);
        } else {
            h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
        }
        h = std::min(100.0 * h0, h1);
    }
    const double span = times.back() - times.front();
    h = std::min(h, span);
    if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);

    long long n_steps = 0;
    double fac_max = 5.0;

    for (std::size_t target_idx = 1; target_idx < times.size(); ++target_idx) {
        const double t_target = times[target_idx];
        while (t < t_target) {
            bool clipped = false;
            double h_try = h;
            if (t + h_try >= t_target) {
                h_try = t_target - t;
                clipped = true;
            }
            if (h_try < cfg.min_step_floor * std::max(1.0, std::abs(t)) && !clipped) {
                throw StepSizeError("adaptive step size underflow at t=" + std::to_string(t), t);
            }
            if (++n_steps > cfg.max_steps) {
                throw NumericalError("integrator exceeded max_steps budget");
            }

            ytmp = y + (h_try * a21) * k1;
            rhs(ytmp, k2);
            ytmp = y + h_try * (a31 * k1 + a32 * k2);
            rhs(ytmp, k3);
            ytmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
            rhs(ytmp, k4);
            ytmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
            rhs(ytmp, k5);
            ytmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
            rhs(ytmp, k6);
            ynew = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            rhs(ynew, k7); // FSAL
            yerr = h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            const double err = detail::scaled_error_norm(y, ynew, yerr, cfg.atol, cfg.rtol);
            if (err <= 1.0) {
                t = clipped ? t_target : t + h_try;
                y.swap(ynew);
                on_accept(y, t);
                k1.swap(k7);
                const double fac = std::clamp(
                    0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, fac_max);
                // a step clipped to the sample boundary must not shrink later steps
                h = clipped ? std::max(h, h_try * fac) : h_try * fac;
                fac_max = 5.0;
            } else {
                h = h_try * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
                fac_max = 1.0; // be conservative right after a rejection
            }
            if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
        }
        on_sample(target_idx, t, y);
    }
    return h;
}

template <class State, class Rhs, class SampleCb>
double integrate_to_samples(Rhs&& rhs, State& y, std::span<const double> times,
                            const IntegratorCfg& cfg, SampleCb&& on_sample) {
    return integrate_to_samples(std::forward<Rhs>(rhs), y, times, cfg,
                                std::forward<SampleCb>(on_sample),
                                [](State&, double) {});
}

} // namespace rabisim

#endif
