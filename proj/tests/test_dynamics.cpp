#include <doctest.h>

#include "test_helpers.hpp"
#include "zenolab/dynamics.hpp"
#include "zenolab/zeno.hpp"

using namespace zenolab;
using zenolab::testing::pi;

TEST_CASE("time grid") {
    const TimeGrid g(1.0, 3.0, 4);
    CHECK(g.times() == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
    CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 4), ContractViolation);
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), ContractViolation);
}

TEST_CASE("free evolution examples") {
    const BathParams vac = BathParams::vacuum();
    const TimeGrid grid(0, 5, 50);

    const auto ground = evolve_free(vac, DensityMatrix::from_pure(PureState::ground()), grid);
    for (const Bloch& v : ground.values) CHECK((v - Bloch(0, 0, -1)).norm() < 1e-15);

    const auto excited = evolve_free(vac, DensityMatrix::from_pure(PureState::excited()), grid);
    for (std::size_t k = 0; k < excited.size(); ++k)
        CHECK(std::abs(excited.values[k].z() - (2 * std::exp(-excited.times[k]) - 1)) < 1e-12);

    // Zeno state without measurement: <sigma_mu1> relaxes to mu1 . (0, 0, -1/(2N+1)).
    const BathParams b = BathParams::maximal(1, 1, 0);
    const Direction mu1 = zeno_directions(b).mu1;
    // The slow mode relaxes at gamma (N + 1/2 - M).
    const double t_long = 40 / (1.5 - std::sqrt(2.0));
    const auto zp = evolve_free(b, DensityMatrix::from_pure(eigenstates_mu(mu1).first), TimeGrid(0, t_long, 400));
    const double steady = mu1.unit_vector().z() * (-1.0 / 3.0);
    CHECK(mu1.unit_vector().dot(zp.values.front()) == doctest::Approx(1));
    for (std::size_t k = 1; k < zp.size(); ++k)
        CHECK(mu1.unit_vector().dot(zp.values[k]) < mu1.unit_vector().dot(zp.values[k - 1]) + 1e-15);
    CHECK(std::abs(mu1.unit_vector().dot(zp.values.back()) - steady) < 1e-8);
}

TEST_CASE("step-size guard") {
    const BathParams b = BathParams::maximal(1, 1, 0);
    const TimeGrid grid(0, 1, 10);
    IntegratorOptions too_big;
    too_big.step = 0.1 / 3 * 1.01;
    CHECK_THROWS_AS(evolve_free(b, DensityMatrix(), grid, too_big), StepSizeError);
    CHECK_THROWS_AS(evolve_measured(b, Direction(), DensityMatrix(), grid, too_big), StepSizeError);
    IntegratorOptions ok;
    ok.step = 0.1 / 3;
    CHECK_NOTHROW(evolve_free(b, DensityMatrix(), grid, ok));
}

TEST_CASE("analytic free evolution examples") {
    const BathParams b = BathParams::maximal(1, 1, 0);
    const Bloch v0(0.3, -0.4, 0.5);
    CHECK((analytic_free(b, v0, 0) - v0).norm() == 0.0);

    std::mt19937_64 rng(4);
    for (int k = 0; k < 10; ++k) {
        const BathParams bk = BathParams::maximal(1, 0.3 * k, 0.7 * k);
        const double slow = bk.n() + 0.5 - bk.m();
        const Bloch far = analytic_free(bk, zenolab::testing::random_bloch(rng), 60.0 / slow);
        CHECK((far - Bloch(0, 0, -1 / (2 * bk.n() + 1))).norm() < 1e-12);
    }

    const Bloch v = analytic_free(b, Bloch(1, 0, 0), 1.0);
    CHECK(v.x() == doctest::Approx(std::exp(-(1.5 + std::sqrt(2.0)))).epsilon(1e-14));
    CHECK(std::abs(v.y()) < 1e-16);
    CHECK(v.z() == doctest::Approx((std::exp(-3.0) - 1) / 3).epsilon(1e-14));
}

TEST_CASE("three routes for free evolution agree") {
    // RK4 on the Bloch equations, the closed form, and the matrix exponential of the
    // affine generator, over random baths (sub-maximal M included) and states.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 10; ++k) {
        const double n = 3 * u(rng);
        const BathParams b(1.0, n, u(rng) * std::sqrt(n * (n + 1)), 2 * pi * u(rng));
        const Bloch v0 = zenolab::testing::random_bloch(rng, k % 2 == 0);
        const TimeGrid grid(0, 5, 25);
        const auto num = evolve_free(b, bloch_to_matrix(v0), grid);
        for (std::size_t i = 0; i < num.size(); ++i) {
            const Bloch a = analytic_free(b, v0, num.times[i]);
            CHECK((num.values[i] - a).cwiseAbs().maxCoeff() < 1e-8);
            CHECK((propagate_exact(b, v0, num.times[i]) - a).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(num.values[i].norm() <= 1 + 1e-12);
        }
    }
}

TEST_CASE("free evolution steady state") {
    for (double n : {0.0, 0.5, 1.0, 3.0}) {
        const BathParams b = BathParams::maximal(1, n, 1.0);
        const double t = 50 / (n + 0.5 - std::sqrt(n * (n + 1)));
        const auto s = evolve_free(b, DensityMatrix::from_pure(PureState::excited()), TimeGrid(0, t, 10));
        CHECK((s.values.back() - Bloch(0, 0, -1 / (2 * n + 1))).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("master-equation RK4 matches the Bloch propagator") {
    const BathParams b = BathParams::maximal(1, 2, 0.8);
    const Bloch v0(0.1, 0.7, -0.2);
    const Matrix2cd x = integrate_master_equation(b, bloch_to_matrix(v0).matrix(), 0.7, 1e-3);
    CHECK((pauli_components<double>(x) - propagate_exact(b, v0, 0.7)).norm() < 1e-12);
    CHECK(std::abs(x.trace() - 1.0) < 1e-14);
}

TEST_CASE("measured coefficients") {
    for (double n : {0.5, 1.0, 2.0, 5.0})
        for (double psi : {0.0, 1.0, pi, 5.0}) {
            const BathParams b = BathParams::maximal(1, n, psi);
            const ZenoDirections z = zeno_directions(b);
            const double expect = 2 * (n - b.m() + 0.5);
            const DriftCoefficients c1 = measured_coefficients(b, z.mu1);
            const DriftCoefficients c2 = measured_coefficients(b, z.mu2);
            CHECK(c1.alpha == doctest::Approx(expect).epsilon(1e-10));
            CHECK(c1.beta == doctest::Approx(-expect).epsilon(1e-10));
            // mu2 gives the same pair.
            CHECK(c2.alpha == doctest::Approx(c1.alpha).epsilon(1e-12));
            CHECK(c2.beta == doctest::Approx(c1.beta).epsilon(1e-12));
        }

    const DriftCoefficients c = measured_coefficients(BathParams::maximal(1, 1, 0), zeno_directions(BathParams::maximal(1, 1, 0)).mu1);
    CHECK(c.alpha == doctest::Approx(0.1715728752538099).epsilon(1e-12));

    // Vacuum, measuring sigma_z: d rho_z/dt = -gamma - gamma rho_z.
    const DriftCoefficients v = measured_coefficients(BathParams::vacuum(2.0), Direction(0, 0));
    CHECK(v.alpha == doctest::Approx(-2.0));
    CHECK(v.beta == doctest::Approx(-2.0));

    // General direction: alpha = c . mu_hat, beta = mu_hat^T A mu_hat.
    std::mt19937_64 rng(9);
    for (int k = 0; k < 40; ++k) {
        const BathParams b(1, 1.5, 1.2, 2 * pi * (k / 40.0));
        const Direction d = zenolab::testing::random_direction(rng);
        const BlochRates r = bloch_rates(b);
        const Bloch mu = d.unit_vector();
        const DriftCoefficients ck = measured_coefficients(b, d);
        CHECK(ck.alpha == doctest::Approx(r.offset.dot(mu)).epsilon(1e-12));
        CHECK(ck.beta == doctest::Approx(mu.dot(r.drift * mu)).epsilon(1e-12));
    }
}

TEST_CASE("measured evolution examples") {
    const BathParams b = BathParams::maximal(1, 1, 0);
    const Direction mu1 = zeno_directions(b).mu1;
    const auto [plus, minus] = eigenstates_mu(mu1);
    const TimeGrid grid(0, 20, 200);

    const MeasuredEvolution frozen = evolve_measured(b, mu1, DensityMatrix::from_pure(plus), grid);
    CHECK_FALSE(frozen.projected);
    for (double v : frozen.expectation.values) CHECK(std::abs(v - 1) < 1e-10);

    const double alpha = 2 * (1.5 - std::sqrt(2.0));
    const MeasuredEvolution rise = evolve_measured(b, mu1, DensityMatrix::from_pure(minus), grid);
    for (std::size_t k = 0; k < rise.expectation.size(); ++k)
        CHECK(std::abs(rise.expectation.values[k] - (1 - 2 * std::exp(-alpha * rise.expectation.times[k]))) < 1e-8);

    // Vacuum: measuring along -z does not change <sigma_z> dynamics.
    const BathParams vac = BathParams::vacuum();
    const Direction down(pi, 0);
    const DensityMatrix excited = DensityMatrix::from_pure(PureState::excited());
    const auto with = evolve_measured(vac, down, excited, grid);
    const auto without = evolve_free(vac, excited, grid);
    for (std::size_t k = 0; k < with.expectation.size(); ++k)
        CHECK(std::abs(with.expectation.values[k] - down.unit_vector().dot(without.values[k])) < 1e-12);
}

TEST_CASE("measured evolution dephases off-manifold states") {
    const BathParams b = BathParams::maximal(1, 1, 0);
    const Direction d(0.4, 1.1);
    const MeasuredEvolution e = evolve_measured(b, d, bloch_to_matrix(Bloch(0.5, 0, 0)), TimeGrid(0, 1, 4));
    CHECK(e.projected);
    CHECK(e.expectation.values.front() == doctest::Approx(0.5 * d.unit_vector().x()));
}

TEST_CASE("trace identity of the measured superoperator") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 100; ++k) {
        const BathParams b = BathParams::maximal(1, 0.1 + 2 * (u(rng) + 1), 3 * (u(rng) + 1));
        const Direction d = zenolab::testing::random_direction(rng);
        const Matrix2cd rho = bloch_to_matrix(Bloch(u(rng) * d.unit_vector())).matrix();
        const Matrix2cd smu = sigma_mu(d);
        const double lhs = (measured_liouvillian(b, d, rho) * smu).trace().real();
        const double rhs = (liouvillian(b, rho) * smu).trace().real();
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("measurement drives every state to the Zeno state") {
    for (double n : {0.5, 1.0, 3.0}) {
        const BathParams b = BathParams::maximal(1, n, 0.9);
        const Direction mu1 = zeno_directions(b).mu1;
        const double alpha = measured_coefficients(b, mu1).alpha;
        CHECK(alpha > 0);
        for (double r0 : {-1.0, -0.3, 0.0, 0.8}) {
            const auto e = evolve_measured(b, mu1, bloch_to_matrix(Bloch(r0 * mu1.unit_vector())), TimeGrid(0, 60 / alpha, 300));
            for (std::size_t k = 1; k < e.expectation.size(); ++k)
                CHECK(e.expectation.values[k] >= e.expectation.values[k - 1]);
            CHECK(std::abs(e.expectation.values.back() - 1) < 1e-10);
        }
    }
}
