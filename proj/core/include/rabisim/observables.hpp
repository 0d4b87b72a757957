#ifndef RABISIM_OBSERVABLES_HPP
#define RABISIM_OBSERVABLES_HPP

#include <optional>
#include <vector>

#include "rabisim/operators.hpp"
#include "rabisim/types.hpp"

namespace rabisim {

/// Sampling grid; tau = xi * t is the dimensionless time used for rate fits.
struct TimeGrid {
    double t_end = 500.0;
    int n_samples = 501;
    double xi = 0.1;

    void validate() const;
    double t(int k) const { return t_end * k / (n_samples - 1); }
    double tau(int k) const { return xi * t(k); }
    std::vector<double> sample_times() const;
};

/// Mixed state with its validation thresholds.
struct DensityMatrix {
    HilbertSpace space;
    Matrix rho;

    static DensityMatrix pure(const HilbertSpace& space, const Vector& psi);
    /// trace within 1e-6 of one, Hermitian to 1e-9, eigenvalues >= -1e-8
    void validate() const;
};

/// One sampled row of every tracked expectation value.
struct ObservableRecord {
    double t = 0.0;
    double tau = 0.0;
    double n_mean = 0.0;
    double sigma_z_mean = 0.0;
    std::optional<double> mandel_q;  // absent when <n> is numerically zero
    double p_e = 0.0;
    double quanta_mean = 0.0;
    double energy_mean = 0.0;
    double trace_error = 0.0;
    double top_level_pop = 0.0;      // population of the two highest Fock levels
};

struct ObservableSeries {
    std::vector<ObservableRecord> rows;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
    const ObservableRecord& operator[](std::size_t k) const { return rows[k]; }
    double tau_max() const { return rows.empty() ? 0.0 : rows.back().tau; }
};

/// Raw per-sample moments of a pure state; the ensemble reducers average
/// these (q is nonlinear in the moments, so it is rebuilt from the averages).
struct RawMoments {
    double n = 0.0;
    double n2 = 0.0;
    double sz = 0.0;
    double pe = 0.0;
    double quanta = 0.0;
    double energy = 0.0;
    double norm_err = 0.0;
    double top = 0.0;
};

/// Precomputed measurement kit for one (space, Hamiltonian) pair. All number
/// operators are diagonal in the chosen basis, so expectations reduce to
/// weighted sums over populations; only the energy needs the full H.
class ObservableSet {
public:
    ObservableSet(const HilbertSpace& space, const QOperator& hamiltonian);

    ObservableRecord record(const Matrix& rho, double t, double tau) const;
    ObservableRecord record(const Vector& psi, double t, double tau) const;

    RawMoments raw(const Vector& psi) const;
    static ObservableRecord from_moments(const RawMoments& m, double t, double tau);

    const HilbertSpace& space() const { return space_; }

private:
    HilbertSpace space_;
    RealVector n_diag_, n2_diag_, sz_diag_, pe_diag_, quanta_diag_, top_diag_;
    Matrix h_;
};

/// Mandel q = (<n^2> - <n>^2 - <n>)/<n>, absent below the vacuum threshold.
std::optional<double> mandel_q(double n_mean, double n2_mean);

/// spec'd convenience form: single record from a density matrix
ObservableRecord observables(const DensityMatrix& rho, const QOperator& hamiltonian,
                             double t = 0.0, double tau = 0.0);

} // namespace rabisim

#endif
