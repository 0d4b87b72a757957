#include "rabisim/master_equation.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rabisim {

Matrix lindblad_rhs(const DensityMatrix& rho_in, const QOperator& hamiltonian,
                    const SimParams& params) {
    if (rho_in.rho.rows() != hamiltonian.elements.rows()) {
        throw std::invalid_argument("lindblad_rhs: dimension mismatch");
    }
    const Matrix& rho = rho_in.rho;
    const Matrix& h = hamiltonian.elements;
    const HilbertSpace& space = rho_in.space;

    auto [a, a_dag, n_op] = field_ops(space);
    auto [sz, sp, sm] = atom_ops(space);
    const Complex i_unit(0.0, 1.0);

    Matrix out = -i_unit * (h * rho - rho * h);

    const double nt = params.n_t;
    if (params.gamma > 0.0) {
        const Matrix spsm = sp.elements * sm.elements;
        out += 0.5 * params.gamma * (nt + 1.0) *
               (2.0 * sm.elements * rho * sp.elements - spsm * rho - rho * spsm);
        if (nt > 0.0) {
            const Matrix smsp = sm.elements * sp.elements;
            out += 0.5 * params.gamma * nt *
                   (2.0 * sp.elements * rho * sm.elements - smsp * rho - rho * smsp);
        }
    }
    if (params.kappa > 0.0) {
        out += 0.5 * params.kappa * (nt + 1.0) *
               (2.0 * a.elements * rho * a_dag.elements - n_op.elements * rho -
                rho * n_op.elements);
        if (nt > 0.0) {
            const Matrix aad = a.elements * a_dag.elements;
            out += 0.5 * params.kappa * nt *
                   (2.0 * a_dag.elements * rho * a.elements - aad * rho - rho * aad);
        }
    }
    if (params.gamma_ph > 0.0) {
        out += params.gamma_ph * (sz.elements * rho * sz.elements - rho);
    }
    return out;
}

LindbladEvaluator::LindbladEvaluator(const QOperator& hamiltonian, const SimParams& params) {
    params.validate();
    const HilbertSpace& space = hamiltonian.space;
    auto [a, a_dag, n_op] = field_ops(space);
    auto [sz, sp, sm] = atom_ops(space);

    std::vector<Matrix> jumps_dense;
    const double nt = params.n_t;
    if (params.gamma > 0.0) {
        jumps_dense.push_back(std::sqrt(params.gamma * (nt + 1.0)) * sm.elements);
        if (nt > 0.0) jumps_dense.push_back(std::sqrt(params.gamma * nt) * sp.elements);
    }
    if (params.kappa > 0.0) {
        jumps_dense.push_back(std::sqrt(params.kappa * (nt + 1.0)) * a.elements);
        if (nt > 0.0) jumps_dense.push_back(std::sqrt(params.kappa * nt) * a_dag.elements);
    }
    if (params.gamma_ph > 0.0) {
        jumps_dense.push_back(std::sqrt(params.gamma_ph) * sz.elements);
    }

    Matrix h_nh = hamiltonian.elements;
    const Complex half_i(0.0, 0.5);
    for (const Matrix& jump : jumps_dense) {
        h_nh -= half_i * (jump.adjoint() * jump);
        jumps_.emplace_back(jump.sparseView());
        jumps_adj_.emplace_back(Matrix(jump.adjoint()).sparseView());
    }
    h_nh_ = h_nh.sparseView();
    h_nh_adj_ = Matrix(h_nh.adjoint()).sparseView();

    const int d = space.dim;
    scratch_a_.resize(d, d);
    scratch_b_.resize(d, d);
}

void LindbladEvaluator::operator()(const Matrix& rho, Matrix& out) const {
    const Complex i_unit(0.0, 1.0);
    // -i (H_nh rho - rho H_nh^t); the adjoint term is formed explicitly so the
    // evaluator stays linear on non-Hermitian inputs (RK stages are not exactly
    // Hermitian).
    scratch_a_.noalias() = h_nh_ * rho;
    scratch_b_.noalias() = rho * h_nh_adj_;
    out = -i_unit * (scratch_a_ - scratch_b_);
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        scratch_a_.noalias() = jumps_[k] * rho;
        scratch_b_.noalias() = scratch_a_ * jumps_adj_[k];
        out += scratch_b_;
    }
}

namespace {

class SampleValidator {
public:
    SampleValidator(const TimeGrid& grid, const IntegratorCfg& cfg) : grid_(grid), cfg_(cfg) {}

    void check(const Matrix& rho, const ObservableRecord& rec, int sample_idx) const {
        if (rec.trace_error > 1e-6) {
            std::ostringstream msg;
            msg << "trace error " << rec.trace_error << " at sample " << sample_idx
                << " (t=" << rec.t << ")";
            throw NumericalError(msg.str());
        }
        if (rec.p_e < -1e-9 || rec.p_e > 1.0 + 1e-9 || rec.n_mean < -1e-9) {
            std::ostringstream msg;
            msg << "unphysical populations at sample " << sample_idx << " (t=" << rec.t
                << "): p_e=" << rec.p_e << ", n_mean=" << rec.n_mean;
            throw NumericalError(msg.str());
        }
        if (rec.top_level_pop > cfg_.trunc_tol) {
            std::ostringstream msg;
            msg << "Fock truncation exceeded: top-level population " << rec.top_level_pop
                << " > " << cfg_.trunc_tol << " first at sample " << sample_idx
                << " (t=" << rec.t << ", tau=" << rec.tau
                << "); largest usable tau is " << grid_.tau(std::max(0, sample_idx - 1))
                << "; increase n_max";
            throw TruncationError(msg.str(), rec.t, rec.tau, rec.top_level_pop);
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        if (min_eig < -1e-8) {
            std::ostringstream msg;
            msg << "density matrix lost positivity (min eigenvalue " << min_eig
                << ") at sample " << sample_idx << " (t=" << rec.t << ")";
            throw NumericalError(msg.str());
        }
    }

private:
    const TimeGrid& grid_;
    const IntegratorCfg& cfg_;
};

} // namespace

EvolveResult evolve(const DensityMatrix& rho0, const QOperator& hamiltonian,
                    const SimParams& params, const TimeGrid& grid,
                    const IntegratorCfg& cfg) {
    grid.validate();
    if (rho0.space != hamiltonian.space) {
        throw std::invalid_argument("evolve: state and Hamiltonian live on different spaces");
    }
    rho0.validate();

    LindbladEvaluator rhs(hamiltonian, params);
    ObservableSet set(rho0.space, hamiltonian);
    SampleValidator validator(grid, cfg);

    const std::vector<double> times = grid.sample_times();
    ObservableSeries series;
    series.rows.reserve(times.size());

    Matrix rho = rho0.rho;
    integrate_to_samples(
        rhs, rho, std::span<const double>(times), cfg,
        [&](int k, double t, const Matrix& state) {
            ObservableRecord rec = set.record(state, t, grid.xi * t);
            validator.check(state, rec, k);
            series.rows.push_back(rec);
        },
        [](Matrix& state, double) {
            state = 0.5 * (state + state.adjoint()).eval();
        });

    return {std::move(series), DensityMatrix{rho0.space, std::move(rho)}};
}

} // namespace rabisim
