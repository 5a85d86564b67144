#include "zenolab/dynamics.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace zenolab {

namespace {

double resolve_step(const BathParams& bath, const IntegratorOptions& options) {
    const double h = options.step.value_or(default_step(bath));
    if (!(h > 0)) throw StepSizeError("integrator: step must be positive");
    if (h > max_stable_step(bath))
        throw StepSizeError("integrator: step " + std::to_string(h) + " exceeds stability limit " +
                            std::to_string(max_stable_step(bath)));
    return h;
}

int substeps(double interval, double h) { return std::max(1, static_cast<int>(std::ceil(interval / h - 1e-9))); }

template <class State, class Rhs> State rk4_step(const State& y, double h, const Rhs& f) {
    const State k1 = f(y);
    const State k2 = f(State(y + 0.5 * h * k1));
    const State k3 = f(State(y + 0.5 * h * k2));
    const State k4 = f(State(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

TimeGrid::TimeGrid(double t_start, double t_end, int n_steps) : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start))
        throw ContractViolation("time grid: t_end must exceed t_start");
    if (n_steps < 1) throw ContractViolation("time grid: n_steps must be at least 1");
}

double TimeGrid::at(int i) const { return i == n_steps_ ? t_end_ : t_start_ + i * spacing(); }

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(n_steps_ + 1);
    for (int i = 0; i <= n_steps_; ++i) t[i] = at(i);
    return t;
}

double default_step(const BathParams& bath) { return 1e-3 / (bath.gamma() * (2 * bath.n() + 1)); }

double max_stable_step(const BathParams& bath) { return 0.1 / (bath.gamma() * (2 * bath.n() + 1)); }

TimeSeries<Bloch> evolve_free(const BathParams& bath, const DensityMatrix& rho0, const TimeGrid& grid,
                              const IntegratorOptions& options) {
    const double h_max = resolve_step(bath, options);
    const BlochRates rates = bloch_rates(bath);
    const auto rhs = [&](const Bloch& v) -> Bloch { return rates.drift * v + rates.offset; };

    const int n_sub = substeps(grid.spacing(), h_max);
    const double h = grid.spacing() / n_sub;

    TimeSeries<Bloch> out;
    out.times = grid.times();
    out.values.reserve(out.times.size());
    Bloch v = rho0.bloch();
    out.values.push_back(v);
    for (int i = 0; i < grid.n_steps(); ++i) {
        for (int k = 0; k < n_sub; ++k) v = rk4_step(v, h, rhs);
        out.values.push_back(v);
    }
    return out;
}

Bloch analytic_free(const BathParams& bath, const Bloch& rho0, double t) {
    const double g = bath.gamma();
    const double n = bath.n();
    const double m = bath.m();
    const double s = std::sin(bath.psi() / 2);
    const double c = std::cos(bath.psi() / 2);
    const double slow = std::exp(-g * (n + 0.5 - m) * t);
    const double fast = std::exp(-g * (n + 0.5 + m) * t);
    const double pop = std::exp(-g * (2 * n + 1) * t);
    const double x0 = rho0.x();
    const double y0 = rho0.y();

    // Projections onto the eigenmodes (s, c) (slow) and (c, -s) (fast) of the transverse block.
    return {(x0 * s * s + y0 * s * c) * slow + (x0 * c * c - y0 * s * c) * fast,
            (y0 * c * c + x0 * s * c) * slow + (y0 * s * s - x0 * s * c) * fast,
            rho0.z() * pop + (pop - 1) / (2 * n + 1)};
}

Eigen::Matrix4d affine_propagator(const BathParams& bath, double t) {
    const Eigen::Matrix4d g = bloch_rates(bath).affine_generator() * t;
    return g.exp();
}

Bloch propagate_exact(const BathParams& bath, const Bloch& rho0, double t) {
    // Relative to the fixed point, so that stationary states stay exactly stationary.
    const BlochRates r = bloch_rates(bath);
    const Bloch steady = -r.drift.partialPivLu().solve(r.offset);
    const Eigen::Matrix3d decay = (r.drift * t).exp();
    return steady + decay * (rho0 - steady);
}

Matrix2cd integrate_master_equation(const BathParams& bath, const Matrix2cd& x0, double t, double step) {
    if (!(step > 0)) throw StepSizeError("integrator: step must be positive");
    if (t == 0) return x0;
    const int n = substeps(t, step);
    const double h = t / n;
    const auto rhs = [&](const Matrix2cd& x) -> Matrix2cd { return liouvillian(bath, x); };
    Matrix2cd x = x0;
    for (int k = 0; k < n; ++k) x = rk4_step(x, h, rhs);
    return x;
}

DriftCoefficients measured_coefficients(const BathParams& bath, const Direction& d) {
    const Matrix2cd smu = sigma_mu(d);
    return {0.5 * (liouvillian(bath, Matrix2cd(pauli::identity())) * smu).trace().real(),
            0.5 * (liouvillian(bath, smu) * smu).trace().real()};
}

Matrix2cd measured_liouvillian(const BathParams& bath, const Direction& d, const Matrix2cd& x) {
    const Matrix2cd p = eigenstates_mu(d).first.projector();
    const Matrix2cd q = pauli::identity() - p;
    const Matrix2cd lx = liouvillian(bath, x);
    return p * lx * p + q * lx * q;
}

MeasuredEvolution evolve_measured(const BathParams& bath, const Direction& d, const DensityMatrix& rho0,
                                  const TimeGrid& grid, const IntegratorOptions& options) {
    const double h_max = resolve_step(bath, options);
    const Bloch mu = d.unit_vector();
    const Bloch v0 = rho0.bloch();

    MeasuredEvolution out;
    out.coefficients = measured_coefficients(bath, d);
    double r = mu.dot(v0);
    out.projected = (v0 - r * mu).norm() > 1e-12;

    const auto [alpha, beta] = out.coefficients;
    const auto rhs = [alpha, beta](double x) { return alpha + beta * x; };
    const int n_sub = substeps(grid.spacing(), h_max);
    const double h = grid.spacing() / n_sub;

    out.expectation.times = grid.times();
    out.expectation.values.reserve(out.expectation.times.size());
    out.expectation.values.push_back(r);
    for (int i = 0; i < grid.n_steps(); ++i) {
        for (int k = 0; k < n_sub; ++k) r = rk4_step(r, h, rhs);
        out.expectation.values.push_back(r);
    }
    return out;
}

} // namespace zenolab
