#ifndef RABISIM_TYPES_HPP
#define RABISIM_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace rabisim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Numerical failure during a simulation run (maps to CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Population leaked into the top Fock levels beyond the configured guard.
class TruncationError : public NumericalError {
public:
    TruncationError(const std::string& msg, double t, double tau, double top_pop)
        : NumericalError(msg), t(t), tau(tau), top_pop(top_pop) {}
    double t;
    double tau;
    double top_pop;
};

/// Adaptive integrator could not make progress at the requested tolerance.
class StepSizeError : public NumericalError {
public:
    StepSizeError(const std::string& msg, double t) : NumericalError(msg), t(t) {}
    double t;
};

/// Configuration / argument validation failure (maps to CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Truncated joint atom (x) field space. Basis ordering is atom-major:
/// |g,0>,|g,1>,...,|g,n_max>,|e,0>,...,|e,n_max>.
struct HilbertSpace {
    int n_max = 1;   // highest Fock level kept
    int dim = 4;     // 2*(n_max+1)

    int fock_levels() const { return n_max + 1; }
    /// Flat index of |s,n> with s=0 ground, s=1 excited.
    int index(int s, int n) const { return s * (n_max + 1) + n; }

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;
};

/// builds the space descriptor; throws std::invalid_argument for n_max < 1
HilbertSpace build_space(int n_max);

/// Physical parameters of the Rabi model plus dissipation rates.
/// Frequencies are in units of the cavity frequency (omega = 1 by default).
struct SimParams {
    double omega = 1.0;    // field frequency
    double omega0 = 1.0;   // atomic transition frequency
    double g = 0.0;        // coupling (vacuum Rabi frequency)
    double gamma_ph = 0.0; // atomic dephasing rate
    double gamma = 0.0;    // atomic relaxation rate
    double kappa = 0.0;    // cavity relaxation rate
    double n_t = 0.0;      // thermal photon number, shared by both reservoirs

    double detuning() const { return omega0 - omega; }
    void validate() const;
};

/// Complex square matrix acting on the joint space.
struct QOperator {
    HilbertSpace space;
    Matrix elements;
    bool hermitian_hint = false;

    QOperator() = default;
    QOperator(const HilbertSpace& space, Matrix m, bool hermitian = false);

    double hermiticity_defect() const {
        return (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    }
};

} // namespace rabisim

#endif
