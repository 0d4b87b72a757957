#include <doctest.h>

#include <cmath>

#include "liouville_oracle.hpp"
#include "rabisim/master_equation.hpp"
#include "rabisim/rng.hpp"

using namespace rabisim;

TEST_SUITE_BEGIN("master-equation");

namespace {

// deterministic random Hermitian density matrix
DensityMatrix random_density(const HilbertSpace& space, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(space.dim, space.dim);
    for (int i = 0; i < space.dim; ++i) {
        for (int j = 0; j < space.dim; ++j) {
            m(i, j) = Complex(rng.uniform_symmetric(), rng.uniform_symmetric());
        }
    }
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    return {space, rho};
}

} // namespace

TEST_CASE("rhs with all rates zero is the pure commutator") {
    const auto space = build_space(3);
    SimParams p;
    p.g = 0.1;
    const auto h = rabi_hamiltonian(p, space);
    const DensityMatrix rho = random_density(space, 11);

    const Matrix rhs = lindblad_rhs(rho, h, p);
    const Complex i_unit(0.0, 1.0);
    const Matrix comm = -i_unit * (h.elements * rho.rho - rho.rho * h.elements);
    CHECK((rhs - comm).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(rhs.trace()) <= 1e-12);
}

TEST_CASE("dephasing flips the sign of atomic coherences at rate 2 gamma_ph") {
    const auto space = build_space(2);
    SimParams p;
    p.gamma_ph = 0.37;
    const auto h = rabi_hamiltonian(p, space);  // g = 0

    // |+><+| (x) |0><0|
    Vector psi = Vector::Zero(space.dim);
    psi(space.index(0, 0)) = 1.0 / std::sqrt(2.0);
    psi(space.index(1, 0)) = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho = DensityMatrix::pure(space, psi);

    const Matrix rhs = lindblad_rhs(rho, h, p);
    const int ie = space.index(1, 0), ig = space.index(0, 0);
    // d rho_eg/dt = -2 gamma_ph rho_eg (the unitary part is real-diagonal here)
    const Complex expected = -2.0 * p.gamma_ph * rho.rho(ie, ig) -
                             Complex(0.0, 1.0) * (h.elements(ie, ie) - h.elements(ig, ig)) *
                                 rho.rho(ie, ig);
    CHECK(std::abs(rhs(ie, ig) - expected) < 1e-14);
}

TEST_CASE("thermal cavity channel pumps the vacuum at kappa n_t") {
    const auto space = build_space(4);
    SimParams p;
    p.kappa = 0.2;
    p.n_t = 0.3;
    const auto h = rabi_hamiltonian(p, space);
    const Vector vac = prepare_state(StateSpec{}, space);
    const DensityMatrix rho = DensityMatrix::pure(space, vac);

    const Matrix rhs = lindblad_rhs(rho, h, p);
    const auto n_op = field_ops(space).n_op;
    const double dn_dt = (rhs.transpose().cwiseProduct(n_op.elements)).sum().real();
    CHECK(dn_dt == doctest::Approx(p.kappa * p.n_t).epsilon(1e-12));
}

TEST_CASE("jump-operator evaluator matches the textual superoperators") {
    const auto space = build_space(3);
    SimParams p;
    p.g = 0.12;
    p.omega0 = 0.9;
    p.gamma_ph = 0.21;
    p.gamma = 0.13;
    p.kappa = 0.08;
    p.n_t = 0.25;
    const auto h = rabi_hamiltonian(p, space);
    const LindbladEvaluator fast(h, p);

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const DensityMatrix rho = random_density(space, seed);
        Matrix got(space.dim, space.dim);
        fast(rho.rho, got);
        const Matrix want = lindblad_rhs(rho, h, p);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(got.trace()) <= 1e-12);
    }
}

TEST_CASE("dephasing alone creates nothing without coupling") {
    const auto space = build_space(4);
    SimParams p;
    p.gamma_ph = 0.1;  // g = 0
    const auto h = rabi_hamiltonian(p, space);
    const DensityMatrix rho0 = DensityMatrix::pure(space, prepare_state(StateSpec{}, space));
    const auto result = evolve(rho0, h, p, TimeGrid{100.0, 51, 0.1});
    for (const auto& row : result.series.rows) {
        CHECK(std::abs(row.n_mean) <= 1e-10);
    }
}

TEST_CASE("closed-system energy is conserved") {
    const auto space = build_space(12);
    SimParams p;
    p.g = 0.1;
    const auto h = rabi_hamiltonian(p, space);
    const DensityMatrix rho0 = DensityMatrix::pure(space, prepare_state(StateSpec{}, space));
    IntegratorCfg cfg;
    cfg.atol = 1e-13;
    cfg.rtol = 1e-11;
    const auto result = evolve(rho0, h, p, TimeGrid{100.0, 41, 0.1}, cfg);
    const double e0 = result.series[0].energy_mean;
    for (const auto& row : result.series.rows) {
        CHECK(std::abs(row.energy_mean - e0) <= 1e-8);
    }
}

TEST_CASE("dephasing-only coherence decays as exp(-2 gamma_ph t)") {
    const auto space = build_space(2);
    SimParams p;
    p.gamma_ph = 0.15;  // g = 0
    const auto h = rabi_hamiltonian(p, space);

    Vector psi = Vector::Zero(space.dim);
    psi(space.index(0, 0)) = 1.0 / std::sqrt(2.0);
    psi(space.index(1, 0)) = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho0 = DensityMatrix::pure(space, psi);
    const Complex c0 = rho0.rho(space.index(1, 0), space.index(0, 0));

    TimeGrid grid{20.0, 21, 0.1};
    const auto result = evolve(rho0, h, p, grid);
    const auto final_rho = result.final_state.rho;
    const double expected = std::abs(c0) * std::exp(-2.0 * p.gamma_ph * grid.t_end);
    CHECK(std::abs(final_rho(space.index(1, 0), space.index(0, 0))) ==
          doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("pure cavity decay of a coherent state") {
    const auto space = build_space(12);
    SimParams p;
    p.kappa = 0.12;  // g = gamma = gamma_ph = n_t = 0
    const auto h = rabi_hamiltonian(p, space);
    const double alpha_sq = 0.5;
    const DensityMatrix rho0 = DensityMatrix::pure(
        space, prepare_state(StateSpec::coherent(StateSpec::Atom::ground,
                                                 std::sqrt(alpha_sq)),
                             space));
    const auto result = evolve(rho0, h, p, TimeGrid{30.0, 31, 0.1});
    for (const auto& row : result.series.rows) {
        const double expected = alpha_sq * std::exp(-p.kappa * row.t);
        CHECK(row.n_mean == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("adaptive integration matches the dense exponential oracle") {
    for (int n_max : {2, 3}) {
        const auto space = build_space(n_max);
        SimParams p;
        p.g = 0.15;
        p.omega0 = 0.9;
        p.gamma_ph = 0.1;
        p.gamma = 0.05;
        p.kappa = 0.04;
        p.n_t = 0.2;
        const auto h = rabi_hamiltonian(p, space);
        const DensityMatrix rho0 = random_density(space, 77);

        const Matrix liouville = testing::dense_liouvillian(h, p);
        TimeGrid grid{20.0, 21, 0.1};
        IntegratorCfg cfg;
        cfg.trunc_tol = 10.0;  // the oracle compares the truncated generators as-is
        const auto result = evolve(rho0, h, p, grid, cfg);
        const Matrix expected_final =
            testing::propagate_exact(liouville, rho0.rho, grid.t_end);
        CHECK((result.final_state.rho - expected_final).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("monotone start: dephasing plus antirotating term populates the field") {
    const auto space = build_space(12);
    SimParams p;
    p.g = 0.1;
    p.gamma_ph = 0.1;
    const auto h = rabi_hamiltonian(p, space);
    const DensityMatrix rho0 = DensityMatrix::pure(space, prepare_state(StateSpec{}, space));
    const auto result = evolve(rho0, h, p, TimeGrid{50.0, 26, 0.1});
    for (std::size_t k = 1; k < result.series.size(); ++k) {
        CHECK(result.series[k].n_mean > 0.0);
    }
}

TEST_CASE("truncation guard aborts with a labeled sample") {
    const auto space = build_space(3);
    SimParams p;
    p.g = 0.1;
    // start on the top Fock level: the guard must fire at the first sample
    const DensityMatrix rho0 = DensityMatrix::pure(
        space, prepare_state(StateSpec::fock(StateSpec::Atom::ground, 3), space));
    const auto h = rabi_hamiltonian(p, space);
    CHECK_THROWS_AS(evolve(rho0, h, p, TimeGrid{10.0, 11, 0.1}), TruncationError);
    try {
        evolve(rho0, h, p, TimeGrid{10.0, 11, 0.1});
    } catch (const TruncationError& err) {
        CHECK(err.top_pop > 1e-6);
        CHECK(std::string(err.what()).find("sample") != std::string::npos);
    }
}

TEST_CASE("Mandel q conventions") {
    const auto space = build_space(14);
    SimParams p;
    const auto h = rabi_hamiltonian(p, space);

    SUBCASE("coherent state is Poissonian") {
        const DensityMatrix rho = DensityMatrix::pure(
            space,
            prepare_state(StateSpec::coherent(StateSpec::Atom::ground, 0.8), space));
        const auto rec = observables(rho, h);
        REQUIRE(rec.mandel_q.has_value());
        CHECK(*rec.mandel_q == doctest::Approx(0.0).epsilon(1e-8));
    }
    SUBCASE("Fock state has q = -1") {
        const DensityMatrix rho = DensityMatrix::pure(
            space, prepare_state(StateSpec::fock(StateSpec::Atom::ground, 3), space));
        const auto rec = observables(rho, h);
        REQUIRE(rec.mandel_q.has_value());
        CHECK(*rec.mandel_q == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("vacuum reports no q") {
        const DensityMatrix rho =
            DensityMatrix::pure(space, prepare_state(StateSpec{}, space));
        const auto rec = observables(rho, h);
        CHECK_FALSE(rec.mandel_q.has_value());
    }
}

TEST_CASE("sampled states stay physical") {
    const auto space = build_space(18);
    SimParams p;
    p.g = 0.1;
    p.gamma_ph = 0.1;
    p.gamma = 0.05;
    p.kappa = 0.02;
    p.n_t = 0.1;
    const auto h = rabi_hamiltonian(p, space);
    const DensityMatrix rho0 = DensityMatrix::pure(space, prepare_state(StateSpec{}, space));
    const auto result = evolve(rho0, h, p, TimeGrid{80.0, 41, 0.1});
    for (const auto& row : result.series.rows) {
        CHECK(row.trace_error <= 1e-6);
        CHECK(row.p_e >= -1e-9);
        CHECK(row.p_e <= 1.0 + 1e-9);
        CHECK(row.n_mean >= -1e-9);
        CHECK(row.top_level_pop >= 0.0);
    }
    result.final_state.validate();
}

TEST_SUITE_END();
