#include <doctest.h>

#include "test_helpers.hpp"
#include "zenolab/zeno.hpp"

using namespace zenolab;
using zenolab::testing::pi;

namespace {

double angle_between(const Direction& a, const Direction& b) {
    return std::acos(std::clamp(a.unit_vector().dot(b.unit_vector()), -1.0, 1.0));
}

} // namespace

TEST_CASE("closed-system survival") {
    const PureState excited = PureState::excited();
    CHECK(closed_system_survival(pauli::sigma_x(), excited, MeasurementSchedule(0.1, 10)) ==
          doctest::Approx(0.9043820750088045).epsilon(1e-14));
    // Eigenstate of H: no loss.
    CHECK(closed_system_survival(pauli::sigma_z(), excited, MeasurementSchedule(0.5, 10)) == 1.0);

    // More frequent measurement over the same total time preserves more.
    double previous = 0;
    for (int s : {2, 4, 8, 16, 32, 64}) {
        const double p = closed_system_survival(pauli::sigma_x(), excited, MeasurementSchedule(1.0 / s, s));
        CHECK(p > previous);
        previous = p;
    }
    CHECK(previous > 0.98);

    CHECK_THROWS_AS(closed_system_survival(pauli::sigma_x(), excited, MeasurementSchedule(2.0, 3)), DomainError);
    CHECK_THROWS_AS(MeasurementSchedule(0.0, 3), ContractViolation);
}

TEST_CASE("survival rate examples") {
    const BathParams vac = BathParams::vacuum(1.5);
    CHECK(survival_rate(vac, PureState::ground()) == 0.0);
    CHECK(survival_rate(vac, PureState::excited()) == doctest::Approx(-1.5));
    const BathParams b = BathParams::maximal(1, 2, 0.4);
    CHECK(survival_rate(b, PureState::excited()) == doctest::Approx(-3.0));
    CHECK(survival_rate(b, PureState::ground()) == doctest::Approx(-2.0));

    for (double n : {0.5, 1.0, 2.0, 5.0})
        for (double psi : {0.0, 1.0, pi, 5.0}) {
            const BathParams bk = BathParams::maximal(1, n, psi);
            const auto [p1, p2] = zeno_states(bk);
            CHECK(std::abs(survival_rate(bk, p1)) < 1e-12);
            CHECK(std::abs(survival_rate(bk, p2)) < 1e-12);
        }
}

TEST_CASE("survival functional is the survival rate of |+>_mu") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 200; ++k) {
        const double n = 3 * u(rng);
        const double m = (k % 3 == 0 ? 1.0 : u(rng)) * std::sqrt(n * (n + 1));
        const BathParams b(0.5 + u(rng), n, m, 2 * pi * u(rng));
        const Direction d = zenolab::testing::random_direction(rng);
        const auto [plus, minus] = eigenstates_mu(d);
        const double f = survival_functional(b, d);
        CHECK(std::abs(f - survival_rate(b, plus)) < 1e-12);
        CHECK(std::abs(survival_functional(b, d, Branch::minus) - survival_rate(b, minus)) < 1e-12);
        CHECK(f <= 1e-12);
    }
}

TEST_CASE("zeno direction examples") {
    const double r2 = std::sqrt(2.0);
    const ZenoDirections z0 = zeno_directions(BathParams::maximal(1, 1, 0));
    CHECK(z0.mu1.phi() == doctest::Approx(pi / 2));
    CHECK(z0.mu2.phi() == doctest::Approx(3 * pi / 2));
    CHECK(std::cos(z0.theta_m) == doctest::Approx(-1 / (3 + 2 * r2)));
    CHECK_FALSE(z0.degenerate);

    const ZenoDirections zp = zeno_directions(BathParams::maximal(1, 1, pi));
    CHECK(std::abs(zp.mu1.phi()) < 1e-15);
    CHECK(zp.mu2.phi() == doctest::Approx(pi));

    const ZenoDirections zv = zeno_directions(BathParams::vacuum());
    CHECK(zv.degenerate);
    CHECK(zv.theta_m == doctest::Approx(pi));
    CHECK(zv.mu1.unit_vector().z() == doctest::Approx(-1));

    // F vanishes at both directions for maximal squeezing, and is strictly negative there otherwise.
    for (double n : {0.5, 1.0, 2.0, 5.0}) {
        const BathParams b = BathParams::maximal(1, n, 2.0);
        const ZenoDirections z = zeno_directions(b);
        CHECK(std::abs(survival_functional(b, z.mu1)) < 1e-12);
        CHECK(std::abs(survival_functional(b, z.mu2)) < 1e-12);
        const BathParams sub(1, n, 0.7 * b.m(), 2.0);
        CHECK(survival_functional(sub, zeno_directions(sub).mu1) < -1e-3);
    }
}

TEST_CASE("closed-form directions maximize F for any M") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 20; ++k) {
        const double n = 0.2 + 3 * u(rng);
        const BathParams b(1, n, u(rng) * std::sqrt(n * (n + 1)), 2 * pi * u(rng));
        const ZenoDirections z = zeno_directions(b);
        const double top = survival_functional(b, z.mu1);
        CHECK(std::abs(survival_functional(b, z.mu2) - top) < 1e-12);
        for (int j = 0; j < 200; ++j)
            CHECK(survival_functional(b, zenolab::testing::random_direction(rng)) <= top + 1e-12);
    }
}

TEST_CASE("zeno state examples") {
    for (double n : {0.5, 1.0, 3.0})
        for (double psi : {0.0, 0.8, 4.0}) {
            const BathParams b = BathParams::maximal(1, n, psi);
            const auto [p1, p2] = zeno_states(b);
            const ZenoDirections z = zeno_directions(b);
            CHECK(p1.bloch().z() == doctest::Approx(std::cos(z.theta_m)).epsilon(1e-12));
            CHECK(fidelity(p1, eigenstates_mu(z.mu1).first) == doctest::Approx(1).epsilon(1e-12));
            CHECK(fidelity(p2, eigenstates_mu(z.mu2).first) == doctest::Approx(1).epsilon(1e-12));
        }
    CHECK_THROWS_AS(zeno_states(BathParams::vacuum()), PreconditionError);
    CHECK_THROWS_AS(zeno_states(BathParams(1, 1, 1, 0)), UnsupportedParameterError);
}

TEST_CASE("grid scan locates the closed-form directions") {
    const BathParams b = BathParams::maximal(1, 1, 0.6);
    const FunctionalSurface s = scan_functional(b, 64, 64);
    const auto [g1, g2] = surface_maxima(s);
    const ZenoDirections z = zeno_directions(b);
    const double cell = std::hypot(s.theta_spacing(), s.phi_spacing());
    const Direction d1(s.theta(g1.i), s.phi(g1.j));
    const Direction d2(s.theta(g2.i), s.phi(g2.j));
    CHECK(std::min(angle_between(d1, z.mu1), angle_between(d1, z.mu2)) < cell);
    CHECK(std::min(angle_between(d2, z.mu1), angle_between(d2, z.mu2)) < cell);
    CHECK(angle_between(d1, d2) > pi / 4);

    const Direction polished = polish_maximum(b, d1);
    CHECK(std::min(angle_between(polished, z.mu1), angle_between(polished, z.mu2)) < 1e-6);
    CHECK(std::abs(survival_functional(b, polished)) < 1e-12);
    for (double v : s.values) CHECK(v <= 1e-9);
}

TEST_CASE("minus branch selects the same measurement axes") {
    // Maxima over |->_mu sit at -mu1 and -mu2, i.e. the observables -sigma_mu1, -sigma_mu2.
    const BathParams b = BathParams::maximal(1, 2, 1.1);
    const ZenoDirections z = zeno_directions(b);
    const FunctionalSurface s = scan_functional(b, 64, 64, Branch::minus);
    const auto [g1, g2] = surface_maxima(s);
    const double cell = std::hypot(s.theta_spacing(), s.phi_spacing());
    const Direction anti1 = Direction::from_vector(-z.mu1.unit_vector());
    const Direction anti2 = Direction::from_vector(-z.mu2.unit_vector());
    for (const GridMaximum& g : {g1, g2}) {
        const Direction d(s.theta(g.i), s.phi(g.j));
        CHECK(std::min(angle_between(d, anti1), angle_between(d, anti2)) < cell);
        const Direction p = polish_maximum(b, d, Branch::minus);
        CHECK(std::abs(survival_functional(b, p, Branch::minus)) < 1e-12);
    }
}

TEST_CASE("repeated measurement survival") {
    const BathParams vac = BathParams::vacuum();
    const SurvivalCurve ground = repeated_measurement_survival(vac, PureState::ground(), MeasurementSchedule(0.1, 50));
    for (double p : ground.probability) CHECK(p == 1.0);

    const BathParams b = BathParams::maximal(1, 1, 0.3);
    const SurvivalCurve c = repeated_measurement_survival(b, PureState::excited(), MeasurementSchedule(0.05, 40));
    CHECK(c.size() == 41);
    CHECK(c.probability.front() == 1.0);
    for (std::size_t k = 1; k < c.size(); ++k) {
        CHECK(c.probability[k] <= c.probability[k - 1]);
        CHECK(c.probability[k] >= 0.0);
    }

    // First-order limit: the fitted rate approaches survival_rate linearly in dt.
    const double rate = survival_rate(b, PureState::excited());
    double previous_error = 1;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        const double fitted = repeated_measurement_survival(b, PureState::excited(), MeasurementSchedule(dt, 100)).fitted_rate();
        const double error = std::abs(fitted - rate);
        CHECK(error < previous_error / 5);
        previous_error = error;
    }
    CHECK(previous_error < 1e-3);

    // Exact, first- and second-order curves share the small-dt behaviour.
    const MeasurementSchedule fine(1e-3, 200);
    const SurvivalCurve exact = repeated_measurement_survival(b, PureState::excited(), fine);
    const SurvivalCurve first = first_order_survival(b, PureState::excited(), fine);
    const SurvivalCurve second = second_order_survival(b, PureState::excited(), fine);
    CHECK(std::abs(exact.probability.back() - second.probability.back()) <
          std::abs(exact.probability.back() - first.probability.back()));
}

TEST_CASE("second-order rate") {
    const BathParams b = BathParams::maximal(1, 1, 0);
    const PureState a = zeno_states(b).first;

    // Independent double application of the three-term superoperator.
    const Matrix2cd rho = a.projector();
    const Matrix2cd twice = liouvillian_from_s(b, liouvillian_from_s(b, rho));
    const double element = a.matrix_element(twice).real();
    CHECK(second_order_element(b, a) == doctest::Approx(element).epsilon(1e-12));
    CHECK(element < 0);

    const double l1 = second_order_rate(b, a, 0.01);
    CHECK(l1 == doctest::Approx(element * 0.005).epsilon(1e-12));
    CHECK(second_order_rate(b, a, 0.02) == doctest::Approx(2 * l1).epsilon(1e-12));
    CHECK(second_order_rate(BathParams::vacuum(), PureState::ground(), 0.01) == 0.0);
    CHECK_THROWS_AS(second_order_rate(b, PureState::excited(), 0.01), PreconditionError);

    const double fitted = repeated_measurement_survival(b, a, MeasurementSchedule(0.001, 1000)).fitted_rate();
    CHECK(fitted == doctest::Approx(second_order_rate(b, a, 0.001)).epsilon(0.05));
}

TEST_CASE("monte carlo survival") {
    const BathParams vac = BathParams::vacuum();
    MonteCarloOptions opt;
    opt.n_trajectories = 500;
    opt.seed = 5;
    const SurvivalCurve ground = monte_carlo_survival(vac, PureState::ground(), MeasurementSchedule(0.1, 20), opt);
    for (std::size_t k = 0; k < ground.size(); ++k) {
        CHECK(ground.probability[k] == 1.0);
        CHECK(ground.standard_error[k] == 0.0);
    }

    const BathParams b = BathParams::maximal(1, 0.5, 1.0);
    const MeasurementSchedule sched(0.05, 30);
    opt.n_trajectories = 20000;
    opt.threads = 1;
    const SurvivalCurve a = monte_carlo_survival(b, PureState::excited(), sched, opt);
    opt.threads = 3;
    const SurvivalCurve c = monte_carlo_survival(b, PureState::excited(), sched, opt);
    CHECK(a.probability == c.probability);
    opt.seed = 6;
    CHECK(monte_carlo_survival(b, PureState::excited(), sched, opt).probability != a.probability);

    const SurvivalCurve exact = repeated_measurement_survival(b, PureState::excited(), sched);
    for (std::size_t k = 1; k < a.size(); ++k) {
        const double sigma = std::sqrt(exact.probability[k] * (1 - exact.probability[k]) / opt.n_trajectories);
        CHECK(std::abs(a.probability[k] - exact.probability[k]) < 4 * sigma);
        CHECK(a.probability[k] <= a.probability[k - 1]);
    }

    opt.n_trajectories = 0;
    CHECK_THROWS_AS(monte_carlo_survival(b, PureState::excited(), sched, opt), ContractViolation);
}
