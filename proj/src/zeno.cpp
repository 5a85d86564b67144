#include "zenolab/zeno.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "zenolab/rng.hpp"

namespace zenolab {

namespace {

constexpr double pi = std::numbers::pi;

double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2 * pi);
    return std::min(d, 2 * pi - d);
}

SurvivalCurve power_curve(double per_step, const MeasurementSchedule& sched) {
    SurvivalCurve c;
    c.times.resize(sched.count() + 1);
    c.probability.resize(sched.count() + 1);
    double p = 1.0;
    for (int k = 0; k <= sched.count(); ++k) {
        c.times[k] = k * sched.dt();
        c.probability[k] = p;
        p *= per_step;
    }
    return c;
}

} // namespace

MeasurementSchedule::MeasurementSchedule(double dt, int count) : dt_(dt), count_(count) {
    if (!std::isfinite(dt) || !(dt > 0)) throw ContractViolation("schedule: dt must be positive");
    if (count < 1) throw ContractViolation("schedule: measurement count must be at least 1");
}

double SurvivalCurve::fitted_rate() const {
    if (times.size() < 2 || !(times.back() > 0)) throw ContractViolation("survival curve: no elapsed time to fit");
    return std::log(probability.back()) / times.back();
}

double closed_system_survival(const Matrix2cd& hamiltonian, const PureState& state, const MeasurementSchedule& sched) {
    if (!is_hermitian<double>(hamiltonian)) throw ContractViolation("closed_system_survival: H is not Hermitian");
    const double mean = state.matrix_element(hamiltonian).real();
    const double variance = std::max(0.0, state.matrix_element(hamiltonian * hamiltonian).real() - mean * mean);
    const double loss = sched.dt() * sched.dt() * variance;
    if (loss > 1)
        throw DomainError("closed_system_survival: dt^2 Var(H) = " + std::to_string(loss) +
                          " > 1, short-time expansion invalid");
    return std::pow(1 - loss, sched.count());
}

double survival_rate(const BathParams& bath, const PureState& state) {
    return state.matrix_element(liouvillian(bath, state.projector())).real();
}

double second_order_element(const BathParams& bath, const PureState& state) {
    return state.matrix_element(liouvillian(bath, liouvillian(bath, state.projector()))).real();
}

double second_order_rate(const BathParams& bath, const PureState& state, double dt) {
    const double first = survival_rate(bath, state);
    if (std::abs(first) > 1e-10 * bath.gamma())
        throw PreconditionError("second_order_rate: first-order rate " + std::to_string(first) +
                                " does not vanish");
    return second_order_element(bath, state) * dt / 2;
}

double survival_functional(const BathParams& bath, const Direction& d, Branch branch) {
    Bloch r = d.unit_vector();
    if (branch == Branch::minus) r = -r;
    const double x = r.x();
    const double y = r.y();
    const double z = r.z();
    const double g = bath.gamma();
    const double n = bath.n();
    const double m = bath.m();
    const double cp = std::cos(bath.psi());
    const double sp = std::sin(bath.psi());
    return -0.5 * g * (n + 1) * (z + z * z + 0.5 * x * x + 0.5 * y * y) +
           0.5 * g * n * (z - z * z - 0.5 * x * x - 0.5 * y * y) - 0.5 * g * m * x * (cp * x - sp * y) +
           0.5 * g * m * y * (sp * x + cp * y);
}

double FunctionalSurface::theta(int i) const { return i == n_theta - 1 ? pi : pi * i / (n_theta - 1); }
double FunctionalSurface::phi(int j) const { return 2 * pi * j / n_phi; }
double FunctionalSurface::theta_spacing() const { return pi / (n_theta - 1); }
double FunctionalSurface::phi_spacing() const { return 2 * pi / n_phi; }

FunctionalSurface scan_functional(const BathParams& bath, int n_theta, int n_phi, Branch branch) {
    if (n_theta < 2 || n_phi < 1) throw ContractViolation("scan_functional: grid needs n_theta >= 2, n_phi >= 1");
    FunctionalSurface s{n_theta, n_phi, {}};
    s.values.resize(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j)
            s.values[static_cast<std::size_t>(i) * n_phi + j] =
                survival_functional(bath, Direction(s.theta(i), s.phi(j)), branch);
    return s;
}

std::pair<GridMaximum, GridMaximum> surface_maxima(const FunctionalSurface& surface) {
    GridMaximum best{0, 0, surface.at(0, 0)};
    for (int i = 0; i < surface.n_theta; ++i)
        for (int j = 0; j < surface.n_phi; ++j)
            if (surface.at(i, j) > best.value) best = {i, j, surface.at(i, j)};

    const double phi_best = surface.phi(best.j);
    GridMaximum second{-1, -1, -std::numeric_limits<double>::infinity()};
    for (int i = 0; i < surface.n_theta; ++i)
        for (int j = 0; j < surface.n_phi; ++j)
            if (circular_distance(surface.phi(j), phi_best) >= pi / 2 && surface.at(i, j) > second.value)
                second = {i, j, surface.at(i, j)};
    if (second.i < 0) second = best;
    return {best, second};
}

Direction polish_maximum(const BathParams& bath, const Direction& start, Branch branch) {
    double theta = start.theta();
    double phi = start.phi();
    const auto f = [&](double t, double p) { return survival_functional(bath, Direction(std::clamp(t, 0.0, pi), p), branch); };

    // One parabolic step along a coordinate, accepted only if it does not decrease f.
    const auto refine = [&](double& coord, double h, bool is_theta) {
        const auto eval = [&](double c) { return is_theta ? f(c, phi) : f(theta, c); };
        double lo = coord - h;
        double hi = coord + h;
        if (is_theta) {
            lo = std::max(lo, 0.0);
            hi = std::min(hi, pi);
        }
        const double f0 = eval(coord);
        const double fl = eval(lo);
        const double fh = eval(hi);
        double candidate = coord;
        double fc = f0;
        if (fl > fc) candidate = lo, fc = fl;
        if (fh > fc) candidate = hi, fc = fh;
        const double dl = coord - lo;
        const double dh = hi - coord;
        if (dl > 0 && dh > 0) {
            // Vertex of the parabola through (lo, fl), (coord, f0), (hi, fh).
            const double num = dl * dl * (f0 - fh) - dh * dh * (f0 - fl);
            const double den = dl * (f0 - fh) + dh * (f0 - fl);
            if (den != 0) {
                const double v = std::clamp(coord - 0.5 * num / den, lo, hi);
                const double fv = eval(v);
                if (fv >= fc) candidate = v, fc = fv;
            }
        }
        coord = candidate;
        return fc > f0;
    };

    double h = std::max(pi / 64, 1e-3);
    for (int iter = 0; iter < 400 && h > 1e-13; ++iter) {
        const bool moved_t = refine(theta, h, true);
        const bool moved_p = refine(phi, h, false);
        if (!moved_t && !moved_p) h *= 0.5;
    }
    return Direction(std::clamp(theta, 0.0, pi), phi);
}

ZenoDirections zeno_directions(const BathParams& bath) {
    const double cos_theta = -1.0 / (2 * (bath.n() + bath.m() + 0.5));
    const double theta = std::acos(cos_theta);
    const double phi1 = (pi - bath.psi()) / 2;
    return {Direction(theta, phi1), Direction(theta, phi1 + pi), theta, bath.n() == 0};
}

std::pair<PureState, PureState> zeno_states(const BathParams& bath) {
    if (!(bath.n() > 0)) throw PreconditionError("zeno_states: N must be positive");
    if (!bath.is_maximal())
        throw UnsupportedParameterError("zeno_states: closed form requires M = sqrt(N(N+1))");
    const double n = bath.n();
    const double m = bath.m();
    const std::complex<double> plus(std::sqrt(n / (n + m)));
    const std::complex<double> minus =
        std::complex<double>(0, 1) * std::sqrt(m / (n + m)) * std::polar(1.0, -bath.psi() / 2);
    return {PureState::normalized(Ket2d(plus, minus)), PureState::normalized(Ket2d(plus, -minus))};
}

double step_survival_probability(const BathParams& bath, const PureState& state, double dt) {
    const Bloch a = state.bloch();
    const Bloch v = propagate_exact(bath, a, dt);
    return std::clamp(0.5 * (1 + a.dot(v)), 0.0, 1.0);
}

SurvivalCurve repeated_measurement_survival(const BathParams& bath, const PureState& state,
                                            const MeasurementSchedule& sched) {
    return power_curve(step_survival_probability(bath, state, sched.dt()), sched);
}

SurvivalCurve first_order_survival(const BathParams& bath, const PureState& state, const MeasurementSchedule& sched) {
    return power_curve(1 + sched.dt() * survival_rate(bath, state), sched);
}

SurvivalCurve second_order_survival(const BathParams& bath, const PureState& state, const MeasurementSchedule& sched) {
    const double dt = sched.dt();
    return power_curve(1 + dt * survival_rate(bath, state) + 0.5 * dt * dt * second_order_element(bath, state), sched);
}

SurvivalCurve monte_carlo_survival(const BathParams& bath, const PureState& state, const MeasurementSchedule& sched,
                                   const MonteCarloOptions& options) {
    if (options.n_trajectories < 1) throw ContractViolation("monte_carlo_survival: n_traj must be at least 1");

    const Matrix2cd rho_dt = integrate_master_equation(bath, state.projector(), sched.dt(),
                                                       std::min(default_step(bath), sched.dt() / 16));
    const double p = std::clamp(state.matrix_element(rho_dt).real(), 0.0, 1.0);
    const Philox4x32 rng(options.seed);

    const int steps = sched.count();
    const long long n_traj = options.n_trajectories;
    unsigned n_threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<long long>(n_threads, n_traj));

    // alive[t][k] counts trajectories of chunk t that survived the first k measurements.
    std::vector<std::vector<long long>> alive(n_threads, std::vector<long long>(steps + 1, 0));
    const auto run_chunk = [&](unsigned t) {
        const long long begin = n_traj * t / n_threads;
        const long long end = n_traj * (t + 1) / n_threads;
        auto& counts = alive[t];
        for (long long traj = begin; traj < end; ++traj) {
            int k = 0;
            while (k < steps && rng.uniform(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(traj)) < p) ++k;
            ++counts[k];
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(run_chunk, t);
        run_chunk(0);
    }

    // Convert "died after exactly k successes" histograms into survivor counts.
    std::vector<long long> last(steps + 1, 0);
    for (const auto& counts : alive)
        for (int k = 0; k <= steps; ++k) last[k] += counts[k];

    SurvivalCurve c;
    c.times.resize(steps + 1);
    c.probability.resize(steps + 1);
    c.standard_error.resize(steps + 1);
    long long survivors = n_traj;
    for (int k = 0; k <= steps; ++k) {
        const double frac = static_cast<double>(survivors) / n_traj;
        c.times[k] = k * sched.dt();
        c.probability[k] = frac;
        c.standard_error[k] = std::sqrt(frac * (1 - frac) / n_traj);
        survivors -= last[k];
    }
    return c;
}

} // namespace zenolab
