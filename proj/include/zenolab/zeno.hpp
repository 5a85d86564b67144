#pragma once

// Survival of a measured eigenstate under repeated projective measurement, the
// survival functional over measurement directions and the two bath-selected
// directions whose +1 eigenstates never decay (Total Zeno Effect).

#include <cstdint>
#include <utility>
#include <vector>

#include "zenolab/bath.hpp"
#include "zenolab/dynamics.hpp"
#include "zenolab/pauli.hpp"

namespace zenolab {

/// Measurements separated by dt, repeated `count` times.
class MeasurementSchedule {
public:
    MeasurementSchedule(double dt, int count);

    double dt() const { return dt_; }
    int count() const { return count_; }
    double duration() const { return dt_ * count_; }

private:
    double dt_;
    int count_;
};

/// P(t_k) at t_k = k dt, k = 0..S. `standard_error` is filled only by Monte Carlo estimates.
struct SurvivalCurve {
    std::vector<double> times;
    std::vector<double> probability;
    std::vector<double> standard_error;

    std::size_t size() const { return times.size(); }
    // ln P(t_S) / t_S
    double fitted_rate() const;
};

// (1 - dt^2 Var_state(H))^S with hbar = 1. Throws DomainError when dt^2 Var(H) > 1.
double closed_system_survival(const Matrix2cd& hamiltonian, const PureState& state, const MeasurementSchedule& sched);

// <a| L{|a><a|} |a>, the continuous-monitoring decay rate (<= 0).
double survival_rate(const BathParams& bath, const PureState& state);

// <a| L{L{|a><a|}} |a>
double second_order_element(const BathParams& bath, const PureState& state);

// <a| L{L{|a><a|}} |a> dt / 2, valid when survival_rate vanishes.
double second_order_rate(const BathParams& bath, const PureState& state, double dt);

enum class Branch { plus, minus };

// F(theta, phi) = <+|_mu L{|+>_mu <+|_mu} |+>_mu, evaluated from the Bloch
// polynomial with rho(0) = mu_hat. Branch::minus evaluates the same functional
// on |->_mu (equivalently at -mu_hat).
double survival_functional(const BathParams& bath, const Direction& d, Branch branch = Branch::plus);

/// Regular (theta, phi) sampling of the survival functional.
///
/// theta_i = pi i / (n_theta - 1) includes both poles; phi_j = 2 pi j / n_phi.
struct FunctionalSurface {
    int n_theta;
    int n_phi;
    std::vector<double> values; // row-major, index i * n_phi + j

    double theta(int i) const;
    double phi(int j) const;
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n_phi + j]; }
    double theta_spacing() const;
    double phi_spacing() const;
};

FunctionalSurface scan_functional(const BathParams& bath, int n_theta = 256, int n_phi = 256,
                                  Branch branch = Branch::plus);

struct GridMaximum {
    int i;
    int j;
    double value;
};

// The global maximum and the best cell at least pi/2 away in azimuth.
std::pair<GridMaximum, GridMaximum> surface_maxima(const FunctionalSurface& surface);

// Local refinement of a maximum of F by shrinking-stencil parabolic steps.
Direction polish_maximum(const BathParams& bath, const Direction& start, Branch branch = Branch::plus);

struct ZenoDirections {
    Direction mu1;
    Direction mu2;
    double theta_m;
    // N = 0: both directions collapse onto -z.
    bool degenerate{false};
};

// phi_1 = (pi - psi)/2, phi_2 = phi_1 + pi, cos theta_M = -1 / (2 (N + M + 1/2)).
ZenoDirections zeno_directions(const BathParams& bath);

// |+>_mu1 = sqrt(N/(N+M)) |+> + i sqrt(M/(N+M)) e^{-i psi/2} |->, and |+>_mu2 with
// the opposite sign of the |-> amplitude. Requires N > 0 and maximal M.
std::pair<PureState, PureState> zeno_states(const BathParams& bath);

// <a| rho(dt) |a> with rho(0) = |a><a|, from the exact affine propagator.
double step_survival_probability(const BathParams& bath, const PureState& state, double dt);

// P(k dt) = p^k, p from the exact per-interval propagation.
SurvivalCurve repeated_measurement_survival(const BathParams& bath, const PureState& state,
                                            const MeasurementSchedule& sched);

// (1 + dt Lambda)^k
SurvivalCurve first_order_survival(const BathParams& bath, const PureState& state, const MeasurementSchedule& sched);

// (1 + dt Lambda + dt^2 Lambda_2 / 2)^k with Lambda_2 = <a|L{L{|a><a|}}|a>.
SurvivalCurve second_order_survival(const BathParams& bath, const PureState& state, const MeasurementSchedule& sched);

struct MonteCarloOptions {
    int n_trajectories{1000};
    std::uint64_t seed{0};
    // 0 picks std::thread::hardware_concurrency().
    unsigned threads{0};
};

// Survival fraction over independent measurement records, with binomial
// standard errors sqrt(p(1-p)/n). The per-interval survival probability is
// computed by RK4 on the matrix master equation, independently of the
// propagator used by repeated_measurement_survival.
SurvivalCurve monte_carlo_survival(const BathParams& bath, const PureState& state, const MeasurementSchedule& sched,
                                   const MonteCarloOptions& options);

} // namespace zenolab
