#include <doctest.h>

#include <cmath>

#include "rabisim/operators.hpp"

using namespace rabisim;

TEST_SUITE_BEGIN("operators");

TEST_CASE("build_space dimensions and rejection of degenerate cutoffs") {
    CHECK(build_space(1).dim == 4);
    CHECK(build_space(20).dim == 42);
    CHECK(build_space(20).fock_levels() == 21);
    CHECK_THROWS_AS(build_space(0), std::invalid_argument);
    CHECK_THROWS_AS(build_space(-3), std::invalid_argument);
}

TEST_CASE("ladder operator matrix elements") {
    const auto space = build_space(6);
    const auto [a, a_dag, n_op] = field_ops(space);
    for (int s = 0; s < 2; ++s) {
        for (int n = 1; n <= space.n_max; ++n) {
            CHECK(a.elements(space.index(s, n - 1), space.index(s, n)).real() ==
                  doctest::Approx(std::sqrt(double(n))).epsilon(1e-15));
        }
        // a annihilates the vacuum: its |s,0> column is zero
        CHECK(a.elements.col(space.index(s, 0)).norm() == 0.0);
    }
    CHECK((a_dag.elements - a.elements.adjoint()).norm() == 0.0);
    CHECK((n_op.elements - a_dag.elements * a.elements).norm() == 0.0);
}

TEST_CASE("number operator diagonal in atom-major ordering") {
    // |g,0>,|g,1>,|g,2>,|e,0>,|e,1>,|e,2> carries photon numbers 0,1,2,0,1,2
    const auto space = build_space(2);
    const auto n_op = field_ops(space).n_op;
    const double expected[6] = {0, 1, 2, 0, 1, 2};
    for (int i = 0; i < 6; ++i) {
        CHECK(n_op.elements(i, i).real() == doctest::Approx(expected[i]).epsilon(1e-15));
        CHECK(n_op.elements(i, i).imag() == 0.0);
    }
    CHECK(n_op.elements.cwiseAbs().sum() ==
          doctest::Approx(n_op.elements.diagonal().cwiseAbs().sum()));  // diagonal
}

TEST_CASE("atomic operators") {
    const auto space = build_space(4);
    const auto [sz, sp, sm] = atom_ops(space);

    int plus = 0, minus = 0;
    for (int i = 0; i < space.dim; ++i) {
        const double v = sz.elements(i, i).real();
        CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
        (v > 0 ? plus : minus) += 1;
    }
    CHECK(plus == space.fock_levels());
    CHECK(minus == space.fock_levels());

    for (int n = 0; n <= space.n_max; ++n) {
        Vector gn = Vector::Zero(space.dim);
        gn(space.index(0, n)) = 1.0;
        const Vector en = sp.elements * gn;
        CHECK(std::abs(en(space.index(1, n)) - 1.0) < 1e-15);
        CHECK(en.norm() == doctest::Approx(1.0).epsilon(1e-15));
    }

    CHECK((sz.elements * sz.elements - Matrix::Identity(space.dim, space.dim)).norm() == 0.0);
    CHECK((sm.elements - sp.elements.adjoint()).norm() == 0.0);
}

TEST_CASE("Rabi Hamiltonian matrix elements") {
    const auto space = build_space(5);
    SimParams p;
    p.omega0 = 0.8;
    p.g = 0.0;

    SUBCASE("decoupled limit is diagonal with omega*n +/- omega0/2") {
        const auto h = rabi_hamiltonian(p, space);
        CHECK((h.elements - Matrix(h.elements.diagonal().asDiagonal())).norm() < 1e-14);
        for (int s = 0; s < 2; ++s) {
            for (int n = 0; n <= space.n_max; ++n) {
                const double expected = p.omega * n + (s == 0 ? -0.5 : 0.5) * p.omega0;
                CHECK(h.elements(space.index(s, n), space.index(s, n)).real() ==
                      doctest::Approx(expected).epsilon(1e-14));
            }
        }
    }

    SUBCASE("coupling matrix elements") {
        p.g = 0.13;
        p.omega0 = 1.0;
        const auto h = rabi_hamiltonian(p, space);
        CHECK(h.elements(space.index(1, 1), space.index(0, 0)).real() ==
              doctest::Approx(p.g).epsilon(1e-14));  // antirotating
        CHECK(h.elements(space.index(1, 0), space.index(0, 1)).real() ==
              doctest::Approx(p.g).epsilon(1e-14));  // rotating
        CHECK(h.hermiticity_defect() <= 1e-12);
    }
}

TEST_CASE("Jaynes-Cummings Hamiltonian conserves the total quanta") {
    const auto space = build_space(7);
    SimParams p;
    p.g = 0.1;
    const auto h = rabi_hamiltonian(p, space);
    const auto h_jc = jc_hamiltonian(p, space);
    const auto n_tot = total_quanta(space);

    CHECK(std::abs(h_jc.elements(space.index(1, 1), space.index(0, 0))) == 0.0);

    const Matrix comm_jc =
        h_jc.elements * n_tot.elements - n_tot.elements * h_jc.elements;
    CHECK(comm_jc.cwiseAbs().maxCoeff() <= 1e-12);

    const Matrix comm_rh = h.elements * n_tot.elements - n_tot.elements * h.elements;
    CHECK(comm_rh.cwiseAbs().maxCoeff() > 0.05);  // antirotating term breaks it

    // H - H_JC is exactly the antirotating part g(a^t s+ + a s-)
    const auto [a, a_dag, n_op] = field_ops(space);
    const auto [sz, sp, sm] = atom_ops(space);
    const Matrix anti =
        p.g * (a_dag.elements * sp.elements + a.elements * sm.elements);
    CHECK((h.elements - h_jc.elements - anti).cwiseAbs().maxCoeff() <= 1e-14);

    // the antirotating part shifts atom and photon number up/down together
    for (int n = 0; n < space.n_max; ++n) {
        const Complex elem = (h.elements - h_jc.elements)(space.index(1, n + 1),
                                                          space.index(0, n));
        CHECK(elem.real() == doctest::Approx(p.g * std::sqrt(n + 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("exponential phase operator Hamiltonian") {
    const auto space = build_space(6);
    SimParams p;
    p.g = 0.1;
    const auto h_e = phase_hamiltonian(p, space);
    CHECK(h_e.hermiticity_defect() <= 1e-12);

    // coupling rows have unit weight: <e,n+1|H_E|g,n> = g for all n < n_max
    for (int n = 0; n < space.n_max; ++n) {
        CHECK(h_e.elements(space.index(1, n + 1), space.index(0, n)).real() ==
              doctest::Approx(p.g).epsilon(1e-14));
    }
    // E-|0> = 0: no coupling from |g,0> downward
    CHECK(std::abs(h_e.elements(space.index(1, 0), space.index(0, 0))) == 0.0);

    // reconstruct E+ + E- from the coupling block and verify E+E- = 1 - |0><0|
    const int nf = space.fock_levels();
    Matrix e_plus = Matrix::Zero(nf, nf);
    for (int n = 0; n + 1 < nf; ++n) e_plus(n + 1, n) = 1.0;
    const Matrix e_minus = e_plus.adjoint();
    Matrix prod = e_plus * e_minus;
    CHECK(std::abs(prod(0, 0)) == 0.0);
    for (int n = 1; n < nf; ++n) {
        CHECK(prod(n, n).real() == doctest::Approx(1.0).epsilon(1e-15));
    }
    // and the coupling block of H_E equals g (E- + E+) on the field factor
    for (int n = 0; n < nf; ++n) {
        for (int m = 0; m < nf; ++m) {
            CHECK(std::abs(h_e.elements(space.index(1, n), space.index(0, m)) -
                           p.g * (e_minus(n, m) + e_plus(n, m))) < 1e-14);
        }
    }
}

TEST_CASE("total quanta expectation values for the six reference states") {
    const auto space = build_space(12);
    const auto n_tot = total_quanta(space);
    const Complex alpha = std::sqrt(0.05);
    using A = StateSpec::Atom;

    const std::pair<StateSpec, double> cases[] = {
        {StateSpec::fock(A::ground, 0), 0.0},
        {StateSpec::coherent(A::ground, alpha), 0.05},
        {StateSpec::fock(A::superposition, 0), 0.5},
        {StateSpec::coherent(A::superposition, alpha), 0.55},
        {StateSpec::fock(A::excited, 0), 1.0},
        {StateSpec::coherent(A::excited, alpha), 1.05},
    };
    for (const auto& [spec, expected] : cases) {
        const Vector psi = prepare_state(spec, space);
        CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double quanta = psi.dot(n_tot.elements * psi).real();
        CHECK(quanta == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("prepare_state edge cases") {
    const auto space = build_space(10);

    const Vector ground = prepare_state(StateSpec{}, space);
    CHECK(std::abs(ground(space.index(0, 0)) - 1.0) < 1e-15);
    CHECK(ground.norm() == doctest::Approx(1.0));

    // coherent |alpha|^2 = 0.05 keeps <n> = |alpha|^2 at n_max >= 10
    const Vector coh =
        prepare_state(StateSpec::coherent(StateSpec::Atom::ground, std::sqrt(0.05)), space);
    const auto n_op = field_ops(space).n_op;
    CHECK(coh.dot(n_op.elements * coh).real() == doctest::Approx(0.05).epsilon(1e-10));

    CHECK_THROWS_AS(prepare_state(StateSpec::fock(StateSpec::Atom::ground, 5),
                                  build_space(4)),
                    std::invalid_argument);
    // the truncated tail of a big coherent state is detected
    CHECK_THROWS_WITH_AS(prepare_state(StateSpec::coherent(StateSpec::Atom::ground, 2.0),
                                       build_space(5)),
                         doctest::Contains("truncation too small"), std::invalid_argument);
}

TEST_CASE("operator constructors are deterministic") {
    const auto space = build_space(8);
    SimParams p;
    p.g = 0.07;
    p.omega0 = 1.3;
    const auto h1 = rabi_hamiltonian(p, space);
    const auto h2 = rabi_hamiltonian(p, space);
    CHECK((h1.elements - h2.elements).norm() == 0.0);
    const auto n1 = total_quanta(space);
    const auto n2 = total_quanta(space);
    CHECK((n1.elements - n2.elements).norm() == 0.0);
}

TEST_CASE("state spec parsing round trips") {
    const StateSpec s1 = parse_state_spec("e,fock:5");
    CHECK(s1.atom == StateSpec::Atom::excited);
    CHECK(s1.fock_n == 5);
    CHECK(format_state_spec(s1) == "e,fock:5");

    const StateSpec s2 = parse_state_spec("plus,coh:0.25");
    CHECK(s2.atom == StateSpec::Atom::superposition);
    CHECK(s2.field == StateSpec::Field::coherent);
    CHECK(s2.alpha.real() == doctest::Approx(0.25));

    CHECK_THROWS_AS(parse_state_spec("x,fock:0"), ConfigError);
    CHECK_THROWS_AS(parse_state_spec("g"), ConfigError);
    CHECK_THROWS_AS(parse_state_spec("g,fock:abc"), ConfigError);
}

TEST_SUITE_END();
