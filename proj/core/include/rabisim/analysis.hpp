#ifndef RABISIM_ANALYSIS_HPP
#define RABISIM_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "rabisim/master_equation.hpp"

namespace rabisim {

/// Least-squares line through (tau, <n>) over a tail window; beta is the
/// asymptotic photon generation rate d<n>/dtau.
struct RateFit {
    double beta = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double beta_stderr = 0.0;  // OLS standard error of the slope
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    int n_points = 0;

    /// r^2 < 0.98 marks a window that has not reached the linear regime
    bool asymptotic() const { return r_squared >= 0.98; }
};

struct FitWindow {
    double tau_lo;
    double tau_hi;
};

/// Default window [max(15, tau_max/2), tau_max]: past the transient regime,
/// over the second half of the run. Requires at least 10 samples inside.
RateFit fit_rate(const ObservableSeries& series,
                 std::optional<FitWindow> window = std::nullopt);

enum class SweepAxis { omega0_sum, g, gamma_ph };

std::string to_string(SweepAxis axis);

struct SweepPoint {
    double axis_value = 0.0;
    double beta = 0.0;
    double r_squared = 0.0;
    std::string flag;  // "ok", "not-asymptotic", or "truncation-exceeded"
    bool failed() const { return flag == "truncation-exceeded"; }
};

struct SweepResult {
    SweepAxis axis;
    std::vector<SweepPoint> points;
    SimParams fixed;
};

/// One master-equation run from |g,0> plus a tail fit per axis value. Points
/// run in parallel; truncation failures are annotated, not fatal.
SweepResult sweep_beta(SweepAxis axis, const std::vector<double>& values,
                       const SimParams& fixed, const HilbertSpace& space,
                       const TimeGrid& grid, const IntegratorCfg& cfg = {},
                       int threads = 0);

void write_sweep_csv(const std::string& path, const SweepResult& sweep);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

struct HamiltonianComparison {
    ObservableSeries rabi;
    ObservableSeries phase;
    RateFit fit_rabi;
    RateFit fit_phase;
};

/// Two evolve runs from |g,0> differing only in the Hamiltonian (Rabi vs the
/// exponential-phase-operator variant), with their tail fits.
HamiltonianComparison compare_hamiltonians(const SimParams& params,
                                           const HilbertSpace& space,
                                           const TimeGrid& grid,
                                           const IntegratorCfg& cfg = {});

} // namespace rabisim

#endif
