#include "rabisim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rabisim/parallel.hpp"
#include "rabisim/series_io.hpp"

namespace rabisim {

RateFit fit_rate(const ObservableSeries& series, std::optional<FitWindow> window) {
    if (series.empty()) throw ConfigError("fit_rate: empty series");

    const double tau_max = series.tau_max();
    FitWindow w = window.value_or(FitWindow{std::max(15.0, 0.5 * tau_max), tau_max});
    if (!(w.tau_lo < w.tau_hi)) throw ConfigError("fit_rate: window must satisfy tau_lo < tau_hi");
    if (w.tau_lo < series[0].tau - 1e-12 || w.tau_hi > tau_max + 1e-12) {
        std::ostringstream msg;
        msg << "fit_rate: window [" << w.tau_lo << ", " << w.tau_hi
            << "] outside the sampled range [" << series[0].tau << ", " << tau_max << "]";
        throw ConfigError(msg.str());
    }

    std::vector<double> xs, ys;
    for (const auto& row : series.rows) {
        if (row.tau >= w.tau_lo - 1e-12 && row.tau <= w.tau_hi + 1e-12) {
            xs.push_back(row.tau);
            ys.push_back(row.n_mean);
        }
    }
    const int m = static_cast<int>(xs.size());
    if (m < 10) {
        throw ConfigError("fit_rate: needs at least 10 samples in the window, found " +
                          std::to_string(m));
    }

    double x_mean = 0.0, y_mean = 0.0;
    for (int i = 0; i < m; ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= m;
    y_mean /= m;

    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
        sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
    }

    RateFit fit;
    fit.beta = sxy / sxx;
    fit.intercept = y_mean - fit.beta * x_mean;
    fit.tau_lo = w.tau_lo;
    fit.tau_hi = w.tau_hi;
    fit.n_points = m;

    double ss_res = 0.0, ss_tot = 0.0;
    for (int i = 0; i < m; ++i) {
        const double resid = ys[i] - (fit.intercept + fit.beta * xs[i]);
        ss_res += resid * resid;
        ss_tot += (ys[i] - y_mean) * (ys[i] - y_mean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.beta_stderr = std::sqrt(std::max(0.0, ss_res / (m - 2)) / sxx);
    return fit;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::omega0_sum: return "omega0_sum";
        case SweepAxis::g: return "g";
        case SweepAxis::gamma_ph: return "gamma_ph";
    }
    return "?";
}

namespace {

SimParams apply_axis(const SimParams& fixed, SweepAxis axis, double value) {
    SimParams p = fixed;
    switch (axis) {
        case SweepAxis::omega0_sum: p.omega0 = value - p.omega; break;
        case SweepAxis::g: p.g = value; break;
        case SweepAxis::gamma_ph: p.gamma_ph = value; break;
    }
    return p;
}

} // namespace

SweepResult sweep_beta(SweepAxis axis, const std::vector<double>& values,
                       const SimParams& fixed, const HilbertSpace& space,
                       const TimeGrid& grid, const IntegratorCfg& cfg, int threads) {
    if (values.empty()) throw ConfigError("sweep_beta: no axis values given");
    if (!std::is_sorted(values.begin(), values.end())) {
        throw ConfigError("sweep_beta: axis values must be sorted ascending");
    }
    for (double v : values) {
        if (!(v > 0.0)) throw ConfigError("sweep_beta: axis values must be positive");
    }

    SweepResult result;
    result.axis = axis;
    result.fixed = fixed;
    result.points.resize(values.size());

    parallel_for_indexed(static_cast<int>(values.size()), threads, [&](int i) {
        SweepPoint& point = result.points[i];
        point.axis_value = values[i];
        const SimParams params = apply_axis(fixed, axis, values[i]);
        try {
            const QOperator h = rabi_hamiltonian(params, space);
            const Vector psi0 = prepare_state(StateSpec{}, space);  // |g,0>
            const EvolveResult run =
                evolve(DensityMatrix::pure(space, psi0), h, params, grid, cfg);
            const RateFit fit = fit_rate(run.series);
            point.beta = fit.beta;
            point.r_squared = fit.r_squared;
            point.flag = fit.asymptotic() ? "ok" : "not-asymptotic";
        } catch (const TruncationError&) {
            point.beta = std::numeric_limits<double>::quiet_NaN();
            point.r_squared = std::numeric_limits<double>::quiet_NaN();
            point.flag = "truncation-exceeded";
        }
    });
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "axis_value,beta,r_squared,flag\n";
    for (const auto& p : sweep.points) {
        os << format_double(p.axis_value) << ','
           << (p.failed() ? std::string{} : format_double(p.beta)) << ','
           << (p.failed() ? std::string{} : format_double(p.r_squared)) << ','
           << p.flag << "\n";
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_sweep_csv(os, sweep);
}

HamiltonianComparison compare_hamiltonians(const SimParams& params,
                                           const HilbertSpace& space,
                                           const TimeGrid& grid,
                                           const IntegratorCfg& cfg) {
    const Vector psi0 = prepare_state(StateSpec{}, space);  // |g,0>
    const DensityMatrix rho0 = DensityMatrix::pure(space, psi0);

    HamiltonianComparison out;
    out.rabi = evolve(rho0, rabi_hamiltonian(params, space), params, grid, cfg).series;
    out.phase = evolve(rho0, phase_hamiltonian(params, space), params, grid, cfg).series;
    out.fit_rabi = fit_rate(out.rabi);
    out.fit_phase = fit_rate(out.phase);
    return out;
}

} // namespace rabisim
