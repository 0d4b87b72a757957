#include "liouville_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace rabisim::testing {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// column-stacking identities: vec(A X) = (I (x) A) vec(X),
// vec(X B) = (B^T (x) I) vec(X)
Matrix left_mult(const Matrix& a) {
    return kron(Matrix::Identity(a.rows(), a.cols()), a);
}

Matrix right_mult(const Matrix& b) {
    return kron(b.transpose(), Matrix::Identity(b.rows(), b.cols()));
}

// gamma_eff * (2 L rho L^t - L^t L rho - rho L^t L) / 2 in vectorized form
Matrix dissipator(double half_rate_times_two, const Matrix& l) {
    const Matrix ldl = l.adjoint() * l;
    return 0.5 * half_rate_times_two *
           (2.0 * kron(l.conjugate(), l) - left_mult(ldl) - right_mult(ldl));
}

} // namespace

Matrix dense_liouvillian(const QOperator& hamiltonian, const SimParams& params) {
    const HilbertSpace& space = hamiltonian.space;
    auto [a, a_dag, n_op] = field_ops(space);
    auto [sz, sp, sm] = atom_ops(space);

    const Complex i_unit(0.0, 1.0);
    Matrix L = -i_unit * (left_mult(hamiltonian.elements) - right_mult(hamiltonian.elements));

    const double nt = params.n_t;
    if (params.gamma > 0.0) {
        L += dissipator(params.gamma * (nt + 1.0), sm.elements);
        if (nt > 0.0) L += dissipator(params.gamma * nt, sp.elements);
    }
    if (params.kappa > 0.0) {
        L += dissipator(params.kappa * (nt + 1.0), a.elements);
        if (nt > 0.0) L += dissipator(params.kappa * nt, a_dag.elements);
    }
    if (params.gamma_ph > 0.0) {
        // gamma_ph (sz rho sz - rho); sz^t sz = identity
        L += params.gamma_ph *
             (kron(sz.elements.conjugate(), sz.elements) -
              Matrix::Identity(space.dim * space.dim, space.dim * space.dim));
    }
    return L;
}

Vector vectorize(const Matrix& rho) {
    Vector v(rho.size());
    int k = 0;
    for (int j = 0; j < rho.cols(); ++j) {
        for (int i = 0; i < rho.rows(); ++i) v(k++) = rho(i, j);
    }
    return v;
}

Matrix unvectorize(const Vector& v, int dim) {
    Matrix rho(dim, dim);
    int k = 0;
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) rho(i, j) = v(k++);
    }
    return rho;
}

Matrix propagate_exact(const Matrix& liouvillian, const Matrix& rho0, double t) {
    const Matrix expLt = (liouvillian * t).exp();
    return unvectorize(expLt * vectorize(rho0), static_cast<int>(rho0.rows()));
}

Matrix steady_state(const Matrix& liouvillian, int dim) {
    Matrix a = liouvillian;
    Vector b = Vector::Zero(dim * dim);
    // overwrite the first equation with tr(rho) = 1
    for (int j = 0; j < dim * dim; ++j) a(0, j) = 0.0;
    for (int k = 0; k < dim; ++k) a(0, k * dim + k) = 1.0;
    b(0) = 1.0;
    const Vector v = a.partialPivLu().solve(b);
    Matrix rho = unvectorize(v, dim);
    return 0.5 * (rho + rho.adjoint());
}

} // namespace rabisim::testing
