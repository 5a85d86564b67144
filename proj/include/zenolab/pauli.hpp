#pragma once

// Two-level algebra: Pauli/ladder constants, Bloch <-> density-matrix maps and
// spin components along arbitrary directions.
//
// Basis convention: |+> = excited = (1,0)^T, |-> = ground = (0,1)^T, so that
// sigma_z|+-> = +-|+-> and the lowering operator maps |+> to |->.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "zenolab/errors.hpp"

namespace zenolab {

template <class Real> using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <class Real> using Ket2 = Eigen::Matrix<std::complex<Real>, 2, 1>;
template <class Real> using BlochVector = Eigen::Matrix<Real, 3, 1>;

namespace pauli {

template <class Real = double> Matrix2c<Real> identity() { return Matrix2c<Real>::Identity(); }

template <class Real = double> Matrix2c<Real> sigma_x() {
    Matrix2c<Real> m;
    m << 0, 1, 1, 0;
    return m;
}

template <class Real = double> Matrix2c<Real> sigma_y() {
    using C = std::complex<Real>;
    Matrix2c<Real> m;
    m << C(0), C(0, -1), C(0, 1), C(0);
    return m;
}

template <class Real = double> Matrix2c<Real> sigma_z() {
    Matrix2c<Real> m;
    m << 1, 0, 0, -1;
    return m;
}

// sigma = (sigma_x - i sigma_y)/2 = |-><+|
template <class Real = double> Matrix2c<Real> lowering() {
    Matrix2c<Real> m;
    m << 0, 0, 1, 0;
    return m;
}

// sigma^dagger = (sigma_x + i sigma_y)/2 = |+><-|
template <class Real = double> Matrix2c<Real> raising() {
    Matrix2c<Real> m;
    m << 0, 1, 0, 0;
    return m;
}

} // namespace pauli

template <class Real> bool is_hermitian(const Matrix2c<Real>& a, Real tol = Real(1e-12)) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <class Real> Matrix2c<Real> commutator(const Matrix2c<Real>& a, const Matrix2c<Real>& b) {
    return a * b - b * a;
}

template <class Real> Matrix2c<Real> anticommutator(const Matrix2c<Real>& a, const Matrix2c<Real>& b) {
    return a * b + b * a;
}

// (Tr(A sigma_x), Tr(A sigma_y), Tr(A sigma_z)) of an arbitrary Hermitian operator.
// For a density matrix this is the Bloch vector; no trace normalization is applied.
template <class Real> BlochVector<Real> pauli_components(const Matrix2c<Real>& a) {
    return {(a(0, 1) + a(1, 0)).real(), (a(1, 0) - a(0, 1)).imag(), (a(0, 0) - a(1, 1)).real()};
}

// A + v.sigma for scalar a and real vector v.
template <class Real>
Matrix2c<Real> pauli_expansion(Real a, const BlochVector<Real>& v) {
    using C = std::complex<Real>;
    Matrix2c<Real> m;
    m << C(a + v.z()), C(v.x(), -v.y()), C(v.x(), v.y()), C(a - v.z());
    return m;
}

/// Measurement direction on the Bloch sphere.
///
/// theta is the polar angle in [0, pi] and phi the azimuth, reduced to [0, 2pi).
template <class Real> class DirectionT {
public:
    DirectionT() = default;

    DirectionT(Real theta, Real phi) {
        constexpr Real pi = std::numbers::pi_v<Real>;
        constexpr Real slack = Real(1e-12);
        if (!std::isfinite(theta) || !std::isfinite(phi) || theta < -slack || theta > pi + slack)
            throw ContractViolation("direction: theta must lie in [0, pi], got " + std::to_string(theta));
        theta_ = std::clamp(theta, Real(0), pi);
        phi_ = std::fmod(phi, 2 * pi);
        if (phi_ < 0) phi_ += 2 * pi;
        if (phi_ >= 2 * pi) phi_ = 0;
    }

    static DirectionT from_vector(const BlochVector<Real>& v) {
        const Real n = v.norm();
        if (!(n > 0)) throw ContractViolation("direction: zero vector has no direction");
        const Real z = std::clamp(v.z() / n, Real(-1), Real(1));
        return DirectionT(std::acos(z), std::atan2(v.y(), v.x()));
    }

    Real theta() const { return theta_; }
    Real phi() const { return phi_; }

    BlochVector<Real> unit_vector() const {
        return {std::cos(phi_) * std::sin(theta_), std::sin(phi_) * std::sin(theta_), std::cos(theta_)};
    }

private:
    Real theta_{0};
    Real phi_{0};
};

/// Normalized two-level ket c+ |+> + c- |->.
template <class Real> class PureStateT {
public:
    PureStateT() : amp_(Ket2<Real>(std::complex<Real>(1), std::complex<Real>(0))) {}

    explicit PureStateT(const Ket2<Real>& amplitudes, Real tol = Real(1e-12)) : amp_(amplitudes) {
        if (std::abs(amp_.squaredNorm() - 1) > tol)
            throw InvalidStateError("pure state: amplitudes are not normalized (|c|^2 = " +
                                    std::to_string(amp_.squaredNorm()) + ")");
    }

    PureStateT(std::complex<Real> plus, std::complex<Real> minus) : PureStateT(Ket2<Real>(plus, minus)) {}

    static PureStateT normalized(const Ket2<Real>& v) {
        const Real n = v.norm();
        if (!(n > 0)) throw InvalidStateError("pure state: zero vector");
        return PureStateT(Ket2<Real>(v / n));
    }

    static PureStateT excited() { return PureStateT(Ket2<Real>(std::complex<Real>(1), std::complex<Real>(0))); }
    static PureStateT ground() { return PureStateT(Ket2<Real>(std::complex<Real>(0), std::complex<Real>(1))); }

    const Ket2<Real>& ket() const { return amp_; }
    std::complex<Real> plus() const { return amp_(0); }
    std::complex<Real> minus() const { return amp_(1); }

    Matrix2c<Real> projector() const { return amp_ * amp_.adjoint(); }

    BlochVector<Real> bloch() const { return pauli_components<Real>(projector()); }

    // <a|A|a>
    std::complex<Real> matrix_element(const Matrix2c<Real>& a) const { return amp_.dot(a * amp_); }

private:
    Ket2<Real> amp_;
};

// |<a|b>|, the phase-insensitive overlap used for all eigenstate comparisons.
template <class Real> Real fidelity(const PureStateT<Real>& a, const PureStateT<Real>& b) {
    return std::abs(a.ket().dot(b.ket()));
}

/// Hermitian, unit-trace, positive semidefinite 2x2 matrix.
template <class Real> class DensityMatrixT {
public:
    static constexpr Real tolerance = Real(1e-12);

    DensityMatrixT() : m_(pauli::identity<Real>() / Real(2)) {}

    explicit DensityMatrixT(const Matrix2c<Real>& m) : m_(m) {
        if (!is_hermitian<Real>(m, tolerance)) throw InvalidStateError("density matrix: not Hermitian");
        const std::complex<Real> tr = m.trace();
        if (std::abs(tr - Real(1)) > tolerance)
            throw InvalidStateError("density matrix: trace " + std::to_string(tr.real()) + " != 1");
        // For a unit-trace Hermitian 2x2 matrix the eigenvalues are (1 +- |r|)/2.
        if (pauli_components<Real>(m).norm() > 1 + 2 * tolerance)
            throw InvalidStateError("density matrix: not positive semidefinite");
        m_ = Real(0.5) * (m + m.adjoint());
    }

    static DensityMatrixT from_pure(const PureStateT<Real>& s) { return DensityMatrixT(s.projector()); }

    const Matrix2c<Real>& matrix() const { return m_; }
    BlochVector<Real> bloch() const { return pauli_components<Real>(m_); }

    Eigen::Matrix<Real, 2, 1> eigenvalues() const {
        const Real r = bloch().norm();
        return {(1 - r) / 2, (1 + r) / 2};
    }

private:
    Matrix2c<Real> m_;
};

// rho = (1 + v.sigma)/2
template <class Real> DensityMatrixT<Real> bloch_to_matrix(const BlochVector<Real>& v) {
    if (!v.allFinite() || v.norm() > 1 + Real(1e-9))
        throw InvalidStateError("bloch vector: norm " + std::to_string(v.norm()) + " exceeds 1");
    BlochVector<Real> u = v;
    if (u.norm() > 1) u.normalize();
    return DensityMatrixT<Real>(pauli_expansion<Real>(Real(1), u) / Real(2));
}

template <class Real> BlochVector<Real> matrix_to_bloch(const DensityMatrixT<Real>& rho) { return rho.bloch(); }

// Accepts a raw matrix and validates it as a state first.
template <class Real> BlochVector<Real> matrix_to_bloch(const Matrix2c<Real>& m) {
    return DensityMatrixT<Real>(m).bloch();
}

// sigma_mu = sigma . mu_hat
template <class Real> Matrix2c<Real> sigma_mu(const DirectionT<Real>& d) {
    return pauli_expansion<Real>(Real(0), d.unit_vector());
}

/// (|+>_mu, |->_mu) with the phase convention
///   |+>_mu =  cos(theta/2)|+> + sin(theta/2) e^{i phi}|->
///   |->_mu = -sin(theta/2)|+> + cos(theta/2) e^{i phi}|->
template <class Real> std::pair<PureStateT<Real>, PureStateT<Real>> eigenstates_mu(const DirectionT<Real>& d) {
    const Real c = std::cos(d.theta() / 2);
    const Real s = std::sin(d.theta() / 2);
    const std::complex<Real> e = std::polar(Real(1), d.phi());
    return {PureStateT<Real>(Ket2<Real>(std::complex<Real>(c), s * e), Real(1e-12)), PureStateT<Real>(Ket2<Real>(std::complex<Real>(-s), c * e), Real(1e-12))};
}

template <class Real> Real expectation(const DensityMatrixT<Real>& rho, const Matrix2c<Real>& a) {
    if (!is_hermitian<Real>(a, Real(1e-12))) throw ContractViolation("expectation: observable is not Hermitian");
    return (rho.matrix() * a).trace().real();
}

using Matrix2cd = Matrix2c<double>;
using Ket2d = Ket2<double>;
using Bloch = BlochVector<double>;
using Direction = DirectionT<double>;
using PureState = PureStateT<double>;
using DensityMatrix = DensityMatrixT<double>;

} // namespace zenolab
