#include <doctest.h>

#include <cmath>

#include "liouville_oracle.hpp"
#include "rabisim/observables.hpp"

using namespace rabisim;

TEST_SUITE_BEGIN("steady-state");

// Equilibrated circuit-QED numbers. The gt <= 100 window of the fig5b preset
// ends far from equilibrium (the collective relaxation time is ~2/(gamma+kappa)
// ~ 6e3); these checks pin the true asymptotic values via the Liouvillian
// kernel instead of a long integration.

namespace {

double steady_photon_number(double gamma_ph, double gamma, double kappa) {
    const auto space = build_space(15);
    SimParams p;
    p.g = 2e-2;
    p.n_t = 6e-2;
    p.gamma_ph = gamma_ph;
    p.gamma = gamma;
    p.kappa = kappa;
    const auto h = rabi_hamiltonian(p, space);
    const Matrix liouville = testing::dense_liouvillian(h, p);
    const Matrix rho = testing::steady_state(liouville, space.dim);
    const ObservableSet set(space, h);
    return set.record(rho, 0.0, 0.0).n_mean;
}

} // namespace

TEST_CASE("circuit-QED steady states order as the rate budgets suggest") {
    const double n_t = 6e-2;
    const double current = steady_photon_number(2e-4, 3e-4, 4e-5);
    // damping suppressed tenfold while the dephasing stays put
    const double future = steady_photon_number(2e-4, 3e-5, 4e-6);
    const double biased = steady_photon_number(2e-2, 3e-4, 4e-5);

    // today: the dephasing-induced excess hides inside a few percent of n_t
    CHECK(std::abs(current - n_t) / n_t < 0.05);
    CHECK(current > n_t);  // but it is an excess, not a deficit

    // cleaner damping exposes the excess; strong dephasing roughly doubles n_t
    CHECK(future > current);
    CHECK(future < biased);
    CHECK(biased / n_t > 1.5);
    CHECK(biased / n_t < 3.0);
}

TEST_CASE("uniformly rescaling every rate leaves the steady state unchanged") {
    // pumping and loss both scale linearly in the rates, so their balance
    // point is invariant; only the equilibration time changes
    const double full = steady_photon_number(2e-4, 3e-4, 4e-5);
    const double tenth = steady_photon_number(2e-5, 3e-5, 4e-6);
    CHECK(std::abs(full - tenth) / full < 1e-6);
}

TEST_SUITE_END();
