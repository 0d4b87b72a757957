#include "rabisim/observables.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace rabisim {

namespace {
constexpr double kVacuumThreshold = 1e-12;  // below this <n>, Mandel q is 0/0
} // namespace

void TimeGrid::validate() const {
    if (!(t_end > 0.0)) throw ConfigError("TimeGrid: t_end must be > 0");
    if (n_samples < 2) throw ConfigError("TimeGrid: n_samples must be >= 2");
    if (!(xi > 0.0)) throw ConfigError("TimeGrid: xi must be > 0");
}

std::vector<double> TimeGrid::sample_times() const {
    validate();
    std::vector<double> ts(n_samples);
    for (int k = 0; k < n_samples; ++k) ts[k] = t(k);
    return ts;
}

DensityMatrix DensityMatrix::pure(const HilbertSpace& space, const Vector& psi) {
    if (psi.size() != space.dim) {
        throw std::invalid_argument("DensityMatrix::pure: state dimension mismatch");
    }
    return {space, psi * psi.adjoint()};
}

void DensityMatrix::validate() const {
    const double trace_err = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (trace_err > 1e-6) {
        throw NumericalError("density matrix trace deviates from one by " +
                             std::to_string(trace_err));
    }
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-9) {
        throw NumericalError("density matrix hermiticity defect " + std::to_string(herm));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-8) {
        throw NumericalError("density matrix eigenvalue " + std::to_string(min_eig) +
                             " below positivity floor");
    }
}

std::optional<double> mandel_q(double n_mean, double n2_mean) {
    if (n_mean < kVacuumThreshold) return std::nullopt;
    return (n2_mean - n_mean * n_mean - n_mean) / n_mean;
}

ObservableSet::ObservableSet(const HilbertSpace& space, const QOperator& hamiltonian)
    : space_(space), h_(hamiltonian.elements) {
    if (hamiltonian.space != space) {
        throw std::invalid_argument("ObservableSet: Hamiltonian built on a different space");
    }
    const int nf = space.fock_levels();
    n_diag_.resize(space.dim);
    n2_diag_.resize(space.dim);
    sz_diag_.resize(space.dim);
    pe_diag_.resize(space.dim);
    quanta_diag_.resize(space.dim);
    top_diag_.resize(space.dim);
    for (int s = 0; s < 2; ++s) {
        for (int n = 0; n < nf; ++n) {
            const int i = space.index(s, n);
            n_diag_(i) = double(n);
            n2_diag_(i) = double(n) * double(n);
            sz_diag_(i) = s == 0 ? -1.0 : 1.0;
            pe_diag_(i) = s == 0 ? 0.0 : 1.0;
            quanta_diag_(i) = double(n) + double(s);
            top_diag_(i) = (n >= nf - 2) ? 1.0 : 0.0;
        }
    }
}

ObservableRecord ObservableSet::record(const Matrix& rho, double t, double tau) const {
    const RealVector pops = rho.diagonal().real();
    ObservableRecord rec;
    rec.t = t;
    rec.tau = tau;
    rec.n_mean = n_diag_.dot(pops);
    rec.sigma_z_mean = sz_diag_.dot(pops);
    rec.mandel_q = mandel_q(rec.n_mean, n2_diag_.dot(pops));
    rec.p_e = pe_diag_.dot(pops);
    rec.quanta_mean = quanta_diag_.dot(pops);
    rec.energy_mean = (rho.transpose().cwiseProduct(h_)).sum().real();
    rec.trace_error = std::abs(pops.sum() - 1.0);
    rec.top_level_pop = top_diag_.dot(pops);
    return rec;
}

RawMoments ObservableSet::raw(const Vector& psi) const {
    const RealVector pops = psi.cwiseAbs2();
    RawMoments m;
    m.n = n_diag_.dot(pops);
    m.n2 = n2_diag_.dot(pops);
    m.sz = sz_diag_.dot(pops);
    m.pe = pe_diag_.dot(pops);
    m.quanta = quanta_diag_.dot(pops);
    m.energy = psi.dot(h_ * psi).real();
    m.norm_err = std::abs(pops.sum() - 1.0);
    m.top = top_diag_.dot(pops);
    return m;
}

ObservableRecord ObservableSet::from_moments(const RawMoments& m, double t, double tau) {
    ObservableRecord rec;
    rec.t = t;
    rec.tau = tau;
    rec.n_mean = m.n;
    rec.sigma_z_mean = m.sz;
    rec.mandel_q = mandel_q(m.n, m.n2);
    rec.p_e = m.pe;
    rec.quanta_mean = m.quanta;
    rec.energy_mean = m.energy;
    rec.trace_error = m.norm_err;
    rec.top_level_pop = m.top;
    return rec;
}

ObservableRecord ObservableSet::record(const Vector& psi, double t, double tau) const {
    return from_moments(raw(psi), t, tau);
}

ObservableRecord observables(const DensityMatrix& rho, const QOperator& hamiltonian,
                             double t, double tau) {
    ObservableSet set(rho.space, hamiltonian);
    return set.record(rho.rho, t, tau);
}

} // namespace rabisim
