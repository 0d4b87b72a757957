#ifndef RABISIM_MASTER_EQUATION_HPP
#define RABISIM_MASTER_EQUATION_HPP

#include <utility>
#include <vector>

#include "rabisim/integrator.hpp"
#include "rabisim/observables.hpp"
#include "rabisim/operators.hpp"

namespace rabisim {

/// Right-hand side of the master equation,
///   d rho/dt = -i[H,rho] + L_a(rho) + L_f(rho) + L_d(rho),
/// with thermal damping of atom (gamma, n_t) and field (kappa, n_t) and pure
/// atomic dephasing gamma_ph (sz rho sz - rho). Written out term by term;
/// evolve() uses an algebraically identical jump-operator form instead.
Matrix lindblad_rhs(const DensityMatrix& rho, const QOperator& hamiltonian,
                    const SimParams& params);

/// Prebuilt sparse evaluator: rhs = -i(H_nh rho - rho H_nh^t) + sum_k A_k rho A_k^t
/// with H_nh = H - (i/2) sum_k A_k^t A_k and A_k the sqrt(rate)-scaled jumps.
class LindbladEvaluator {
public:
    LindbladEvaluator(const QOperator& hamiltonian, const SimParams& params);

    void operator()(const Matrix& rho, Matrix& out) const;
    int dim() const { return static_cast<int>(h_nh_.rows()); }

private:
    SparseMatrix h_nh_, h_nh_adj_;
    std::vector<SparseMatrix> jumps_, jumps_adj_;
    mutable Matrix scratch_a_, scratch_b_;
};

struct EvolveResult {
    ObservableSeries series;
    DensityMatrix final_state;
};

/// Integrates the master equation over the grid and samples every observable.
/// Aborts with TruncationError once the population of the two highest Fock
/// levels exceeds cfg.trunc_tol, and with NumericalError if a sampled state
/// stops looking like a density matrix (trace, hermiticity, positivity).
EvolveResult evolve(const DensityMatrix& rho0, const QOperator& hamiltonian,
                    const SimParams& params, const TimeGrid& grid,
                    const IntegratorCfg& cfg = {});

} // namespace rabisim

#endif
