#pragma once

// Broadband squeezed-vacuum reservoir acting on a two-level atom (interaction
// picture, zero bath correlation time).

#include <Eigen/Dense>

#include "zenolab/pauli.hpp"

namespace zenolab {

/// Squeezed-bath parameters.
///
/// gamma is the vacuum decay rate, N the mean photon number, M the two-photon
/// correlation magnitude (physical for M <= sqrt(N(N+1))) and psi the squeezing
/// phase, stored reduced to [0, 2pi).
class BathParams {
public:
    static constexpr double maximal_tolerance = 1e-9;

    BathParams(double gamma, double n, double m, double psi);

    // M = sqrt(N(N+1)), the case where a single Lindblad operator suffices.
    static BathParams maximal(double gamma, double n, double psi);
    static BathParams vacuum(double gamma = 1.0) { return BathParams(gamma, 0.0, 0.0, 0.0); }

    double gamma() const { return gamma_; }
    double n() const { return n_; }
    double m() const { return m_; }
    double psi() const { return psi_; }

    double maximal_m() const;
    bool is_maximal(double tol = maximal_tolerance) const;

    // cosh r = sqrt(N+1), sinh r = sqrt(N)
    double squeeze_amplitude() const;

private:
    double gamma_;
    double n_;
    double m_;
    double psi_;
};

/// Linear Bloch equations d(rho_vec)/dt = drift * rho_vec + offset * Tr(rho).
struct BlochRates {
    Eigen::Matrix3d drift;
    Eigen::Vector3d offset;

    // 4x4 generator of the homogeneous form d/dt (rho_vec, 1) = G (rho_vec, 1).
    Eigen::Matrix4d affine_generator() const;
};

// L{X} for any 2x2 operator X (three-term squeezed-bath form).
Matrix2cd liouvillian(const BathParams& bath, const Matrix2cd& x);
Matrix2cd liouvillian(const BathParams& bath, const DensityMatrix& rho);

// S = sqrt(N+1) sigma - sqrt(N) e^{i psi} sigma^dagger; requires maximal M.
Matrix2cd lindblad_s_operator(const BathParams& bath);

// (gamma/2)(2 S X S^dagger - X S^dagger S - S^dagger S X); requires maximal M.
Matrix2cd liouvillian_from_s(const BathParams& bath, const Matrix2cd& x);
Matrix2cd liouvillian_from_s(const BathParams& bath, const DensityMatrix& rho);

// Bloch-equation coefficients obtained by applying the superoperator to the
// operator basis {1, sigma_x, sigma_y, sigma_z}.
BlochRates bloch_rates(const BathParams& bath);

} // namespace zenolab
