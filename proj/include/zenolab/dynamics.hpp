#pragma once

// Time evolution of the two-level density matrix, with and without frequent
// measurement of a spin component sigma_mu. Times are in units of 1/gamma when
// gamma = 1.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zenolab/bath.hpp"
#include "zenolab/pauli.hpp"

namespace zenolab {

/// Output sampling: n_steps + 1 equally spaced instants from t_start to t_end.
class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, int n_steps);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    int n_steps() const { return n_steps_; }
    double spacing() const { return (t_end_ - t_start_) / n_steps_; }
    double at(int i) const;

    std::vector<double> times() const;

private:
    double t_start_;
    double t_end_;
    int n_steps_;
};

template <class Value> struct TimeSeries {
    std::vector<double> times;
    std::vector<Value> values;

    std::size_t size() const { return times.size(); }
};

struct IntegratorOptions {
    // Internal RK4 step; defaults to 1e-3/(gamma(2N+1)).
    std::optional<double> step;
};

double default_step(const BathParams& bath);
// Largest accepted step, 0.1/(gamma(2N+1)).
double max_stable_step(const BathParams& bath);

// Free evolution d rho/dt = L{rho}, RK4 on the Bloch equations.
TimeSeries<Bloch> evolve_free(const BathParams& bath, const DensityMatrix& rho0, const TimeGrid& grid,
                              const IntegratorOptions& options = {});

// Closed-form Bloch-vector solution of the free evolution at time t.
Bloch analytic_free(const BathParams& bath, const Bloch& rho0, double t);

// exp(G t) of the affine Bloch generator, i.e. the exact propagator
// (rho_vec(t), 1) = P(t) (rho_vec(0), 1).
Eigen::Matrix4d affine_propagator(const BathParams& bath, double t);
Bloch propagate_exact(const BathParams& bath, const Bloch& rho0, double t);

// Fixed-step RK4 on the full matrix equation d X/dt = L{X}; independent of the
// Bloch-equation route.
Matrix2cd integrate_master_equation(const BathParams& bath, const Matrix2cd& x0, double t, double step);

// Drift coefficients of the measured scalar equation d<sigma_mu>/dt = alpha + beta <sigma_mu>:
//   alpha = Tr{L{1} sigma_mu}/2,  beta = Tr{L{sigma_mu} sigma_mu}/2.
// (alpha here is the drift, unrelated to the squeeze ratio of intelligent.hpp.)
struct DriftCoefficients {
    double alpha;
    double beta;

    double steady_state() const { return -alpha / beta; }
};

DriftCoefficients measured_coefficients(const BathParams& bath, const Direction& d);

// P L{X} P + (1 - P) L{X} (1 - P), with P = |+>_mu <+|_mu.
Matrix2cd measured_liouvillian(const BathParams& bath, const Direction& d, const Matrix2cd& x);

struct MeasuredEvolution {
    TimeSeries<double> expectation; // <sigma_mu>(t)
    // True when rho0 carried coherences in the measured basis and was dephased at t_start.
    bool projected{false};
    DriftCoefficients coefficients;
};

// Evolution under continuous monitoring of sigma_mu. The state stays on the
// manifold rho = (1 + rho_mu sigma_mu)/2, so only <sigma_mu> is integrated.
MeasuredEvolution evolve_measured(const BathParams& bath, const Direction& d, const DensityMatrix& rho0,
                                  const TimeGrid& grid, const IntegratorOptions& options = {});

} // namespace zenolab
