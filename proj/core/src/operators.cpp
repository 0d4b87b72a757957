#include "rabisim/operators.hpp"

#include <cmath>
#include <sstream>

namespace rabisim {

namespace {
constexpr double kHermitianTol = 1e-12;
constexpr double kCoherentDeficitTol = 1e-10;
} // namespace

HilbertSpace build_space(int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("build_space: n_max must be >= 1, got " +
                                    std::to_string(n_max));
    }
    return HilbertSpace{n_max, 2 * (n_max + 1)};
}

void SimParams::validate() const {
    if (!(omega > 0.0)) throw ConfigError("SimParams: omega must be > 0");
    if (g < 0.0) throw ConfigError("SimParams: g must be >= 0");
    if (gamma_ph < 0.0 || gamma < 0.0 || kappa < 0.0) {
        throw ConfigError("SimParams: dissipation rates must be >= 0");
    }
    if (n_t < 0.0) throw ConfigError("SimParams: n_t must be >= 0");
}

QOperator::QOperator(const HilbertSpace& space, Matrix m, bool hermitian)
    : space(space), elements(std::move(m)), hermitian_hint(hermitian) {
    if (elements.rows() != space.dim || elements.cols() != space.dim) {
        throw std::invalid_argument("QOperator: matrix does not match space dimension");
    }
    if (hermitian_hint && hermiticity_defect() > kHermitianTol) {
        throw std::invalid_argument("QOperator: hermitian_hint set but max|A - A^t| = " +
                                    std::to_string(hermiticity_defect()));
    }
}

FieldOps field_ops(const HilbertSpace& space) {
    const int nf = space.fock_levels();
    Matrix a = Matrix::Zero(space.dim, space.dim);
    for (int s = 0; s < 2; ++s) {
        for (int n = 1; n < nf; ++n) {
            a(space.index(s, n - 1), space.index(s, n)) = std::sqrt(double(n));
        }
    }
    Matrix a_dag = a.adjoint();
    Matrix n_op = a_dag * a;
    return {QOperator(space, std::move(a)), QOperator(space, std::move(a_dag)),
            QOperator(space, std::move(n_op), true)};
}

AtomOps atom_ops(const HilbertSpace& space) {
    const int nf = space.fock_levels();
    Matrix sz = Matrix::Zero(space.dim, space.dim);
    Matrix sp = Matrix::Zero(space.dim, space.dim);
    for (int n = 0; n < nf; ++n) {
        sz(space.index(0, n), space.index(0, n)) = -1.0;
        sz(space.index(1, n), space.index(1, n)) = 1.0;
        sp(space.index(1, n), space.index(0, n)) = 1.0;  // sigma+ |g,n> = |e,n>
    }
    Matrix sm = sp.adjoint();
    return {QOperator(space, std::move(sz), true), QOperator(space, std::move(sp)),
            QOperator(space, std::move(sm))};
}

namespace {

Matrix bare_part(const SimParams& p, const HilbertSpace& space) {
    auto [a, a_dag, n_op] = field_ops(space);
    auto sz = atom_ops(space).sigma_z;
    return p.omega * n_op.elements + 0.5 * p.omega0 * sz.elements;
}

} // namespace

QOperator rabi_hamiltonian(const SimParams& params, const HilbertSpace& space) {
    params.validate();
    auto [a, a_dag, n_op] = field_ops(space);
    auto [sz, sp, sm] = atom_ops(space);
    Matrix h = bare_part(params, space) +
               params.g * (sp.elements + sm.elements) * (a.elements + a_dag.elements);
    return QOperator(space, std::move(h), true);
}

QOperator jc_hamiltonian(const SimParams& params, const HilbertSpace& space) {
    params.validate();
    auto [a, a_dag, n_op] = field_ops(space);
    auto [sz, sp, sm] = atom_ops(space);
    Matrix h = bare_part(params, space) +
               params.g * (sp.elements * a.elements + sm.elements * a_dag.elements);
    return QOperator(space, std::move(h), true);
}

QOperator phase_hamiltonian(const SimParams& params, const HilbertSpace& space) {
    params.validate();
    const int nf = space.fock_levels();
    // E+ = sum_n |n+1><n| (unit weight); E+ annihilates the top level, E- = E+^t
    Matrix e_plus = Matrix::Zero(space.dim, space.dim);
    for (int s = 0; s < 2; ++s) {
        for (int n = 0; n + 1 < nf; ++n) {
            e_plus(space.index(s, n + 1), space.index(s, n)) = 1.0;
        }
    }
    Matrix e_minus = e_plus.adjoint();
    auto [sz, sp, sm] = atom_ops(space);
    Matrix h = bare_part(params, space) +
               params.g * (sp.elements + sm.elements) * (e_minus + e_plus);
    return QOperator(space, std::move(h), true);
}

QOperator total_quanta(const HilbertSpace& space) {
    auto n_op = field_ops(space).n_op;
    auto sz = atom_ops(space).sigma_z;
    Matrix n = n_op.elements + 0.5 * (sz.elements + Matrix::Identity(space.dim, space.dim));
    return QOperator(space, std::move(n), true);
}

Vector prepare_state(const StateSpec& spec, const HilbertSpace& space) {
    const int nf = space.fock_levels();

    Eigen::Vector2cd atom;
    switch (spec.atom) {
        case StateSpec::Atom::ground: atom << 1.0, 0.0; break;
        case StateSpec::Atom::excited: atom << 0.0, 1.0; break;
        case StateSpec::Atom::superposition: atom << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0); break;
    }

    Vector field = Vector::Zero(nf);
    if (spec.field == StateSpec::Field::fock) {
        if (spec.fock_n < 0 || spec.fock_n > space.n_max) {
            throw std::invalid_argument("prepare_state: Fock index " +
                                        std::to_string(spec.fock_n) +
                                        " outside truncated basis (n_max=" +
                                        std::to_string(space.n_max) + ")");
        }
        field(spec.fock_n) = 1.0;
    } else {
        if (!std::isfinite(std::abs(spec.alpha))) {
            throw std::invalid_argument("prepare_state: coherent amplitude must be finite");
        }
        // c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), built iteratively
        Complex c = std::exp(-0.5 * std::norm(spec.alpha));
        for (int n = 0; n < nf; ++n) {
            field(n) = c;
            c *= spec.alpha / std::sqrt(double(n + 1));
        }
        const double deficit = 1.0 - field.squaredNorm();
        if (deficit > kCoherentDeficitTol) {
            std::ostringstream msg;
            msg << "prepare_state: truncation too small for coherent state |alpha|^2="
                << std::norm(spec.alpha) << " (norm deficit " << deficit
                << " at n_max=" << space.n_max << ")";
            throw std::invalid_argument(msg.str());
        }
        field /= field.norm();
    }

    Vector psi = Vector::Zero(space.dim);
    for (int s = 0; s < 2; ++s) {
        psi.segment(s * nf, nf) = atom(s) * field;
    }
    return psi;
}

StateSpec parse_state_spec(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ConfigError("state spec '" + text + "': expected '<atom>,<field>'");
    }
    const std::string atom_s = text.substr(0, comma);
    const std::string field_s = text.substr(comma + 1);

    StateSpec spec;
    if (atom_s == "g") spec.atom = StateSpec::Atom::ground;
    else if (atom_s == "e") spec.atom = StateSpec::Atom::excited;
    else if (atom_s == "plus") spec.atom = StateSpec::Atom::superposition;
    else throw ConfigError("state spec '" + text + "': unknown atom part '" + atom_s + "'");

    if (field_s.rfind("fock:", 0) == 0) {
        spec.field = StateSpec::Field::fock;
        try {
            spec.fock_n = std::stoi(field_s.substr(5));
        } catch (const std::exception&) {
            throw ConfigError("state spec '" + text + "': bad Fock index");
        }
    } else if (field_s.rfind("coh:", 0) == 0) {
        spec.field = StateSpec::Field::coherent;
        try {
            spec.alpha = std::stod(field_s.substr(4));
        } catch (const std::exception&) {
            throw ConfigError("state spec '" + text + "': bad coherent amplitude");
        }
    } else {
        throw ConfigError("state spec '" + text + "': field part must be fock:<n> or coh:<alpha>");
    }
    return spec;
}

std::string format_state_spec(const StateSpec& spec) {
    std::string atom_s;
    switch (spec.atom) {
        case StateSpec::Atom::ground: atom_s = "g"; break;
        case StateSpec::Atom::excited: atom_s = "e"; break;
        case StateSpec::Atom::superposition: atom_s = "plus"; break;
    }
    if (spec.field == StateSpec::Field::fock) {
        return atom_s + ",fock:" + std::to_string(spec.fock_n);
    }
    std::ostringstream os;
    os << atom_s << ",coh:" << spec.alpha.real();
    return os.str();
}

} // namespace rabisim
