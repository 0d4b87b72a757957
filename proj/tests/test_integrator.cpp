#include <doctest.h>

#include <cmath>
#include <vector>

#include "rabisim/integrator.hpp"

using namespace rabisim;

TEST_SUITE_BEGIN("integrator");

TEST_CASE("scalar exponential decay") {
    Vector y(1);
    y(0) = 1.0;
    auto rhs = [](const Vector& v, Vector& out) { out = -v; };
    std::vector<double> ts{0.0, 0.5, 1.0, 2.0, 5.0};
    std::vector<double> got;
    IntegratorCfg cfg;
    integrate_to_samples(rhs, y, std::span<const double>(ts), cfg,
                         [&](int, double, const Vector& v) { got.push_back(v(0).real()); });
    for (std::size_t k = 0; k < ts.size(); ++k) {
        CHECK(got[k] == doctest::Approx(std::exp(-ts[k])).epsilon(1e-7));
    }
}

TEST_CASE("unitary rotation keeps the norm and lands on samples") {
    // i d/dt psi = H psi with H = sigma_x: |0> -> cos(t)|0> - i sin(t)|1>
    Vector y(2);
    y << 1.0, 0.0;
    Matrix h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    auto rhs = [&](const Vector& v, Vector& out) { out = Complex(0.0, -1.0) * (h * v); };
    std::vector<double> ts;
    for (int k = 0; k <= 40; ++k) ts.push_back(0.25 * k);
    IntegratorCfg cfg;
    cfg.atol = 1e-12;
    cfg.rtol = 1e-10;
    double worst_norm = 0.0, worst_val = 0.0;
    integrate_to_samples(rhs, y, std::span<const double>(ts), cfg,
                         [&](int k, double t, const Vector& v) {
                             (void)k;
                             worst_norm = std::max(worst_norm, std::abs(v.norm() - 1.0));
                             worst_val = std::max(worst_val,
                                                  std::abs(v(0).real() - std::cos(t)));
                         });
    CHECK(worst_norm < 1e-8);
    CHECK(worst_val < 1e-7);
}

TEST_CASE("matrix-valued state works the same way") {
    Matrix y = Matrix::Identity(3, 3);
    auto rhs = [](const Matrix& m, Matrix& out) { out = -2.0 * m; };
    std::vector<double> ts{0.0, 1.0};
    IntegratorCfg cfg;
    integrate_to_samples(rhs, y, std::span<const double>(ts), cfg,
                         [](int, double, const Matrix&) {});
    CHECK(y(0, 0).real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-7));
    CHECK(std::abs(y(0, 1)) == 0.0);
}

TEST_CASE("accept hook fires after accepted steps") {
    Vector y(1);
    y(0) = 1.0;
    int accepts = 0;
    auto rhs = [](const Vector& v, Vector& out) { out = -v; };
    std::vector<double> ts{0.0, 1.0};
    IntegratorCfg cfg;
    integrate_to_samples(rhs, y, std::span<const double>(ts), cfg,
                         [](int, double, const Vector&) {},
                         [&](Vector&, double) { ++accepts; });
    CHECK(accepts > 0);
}

TEST_CASE("max_steps budget is enforced") {
    Vector y(1);
    y(0) = 1.0;
    auto rhs = [](const Vector& v, Vector& out) { out = Complex(0, 1000.0) * v; };
    std::vector<double> ts{0.0, 100.0};
    IntegratorCfg cfg;
    cfg.max_steps = 10;
    CHECK_THROWS_AS(integrate_to_samples(rhs, y, std::span<const double>(ts), cfg,
                                         [](int, double, const Vector&) {}),
                    NumericalError);
}

TEST_SUITE_END();
