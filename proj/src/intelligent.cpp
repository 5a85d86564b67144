#include "zenolab/intelligent.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace zenolab {

namespace {

PureState with_real_plus_amplitude(const Ket2d& v) {
    Ket2d u = v;
    if (std::abs(u(0)) > 0) {
        u *= std::polar(1.0, -std::arg(u(0)));
        u(0) = std::abs(u(0));
    }
    return PureState::normalized(u);
}

double variance(const PureState& s, const Matrix2cd& a) {
    const double mean = s.matrix_element(a).real();
    return std::max(0.0, s.matrix_element(a * a).real() - mean * mean);
}

} // namespace

SqueezeFrame SqueezeFrame::from_bath(const BathParams& bath) {
    const double ch = std::sqrt(bath.n() + 1);
    const double sh = std::sqrt(bath.n());
    return {std::asinh(sh), bath.psi(), (ch + sh) / (ch - sh)};
}

std::complex<double> s_eigenvalue_plus(const BathParams& bath) {
    return std::complex<double>(0, std::sqrt(bath.m())) * std::polar(1.0, bath.psi() / 2);
}

SEigensystem s_eigensystem(const BathParams& bath) {
    const Matrix2cd s = lindblad_s_operator(bath);
    if (bath.n() == 0) {
        const PureState g = PureState::ground();
        return {0.0, 0.0, g, g, true};
    }

    Eigen::ComplexEigenSolver<Matrix2cd> solver(s);
    const std::complex<double> frame = std::polar(1.0, -bath.psi() / 2);
    int ip = (solver.eigenvalues()(0) * frame).imag() > 0 ? 0 : 1;
    const int im = 1 - ip;

    SEigensystem out;
    out.lambda_plus = solver.eigenvalues()(ip);
    out.lambda_minus = solver.eigenvalues()(im);
    out.plus = with_real_plus_amplitude(solver.eigenvectors().col(ip));
    out.minus = with_real_plus_amplitude(solver.eigenvectors().col(im));
    return out;
}

RotatedSpin rotated_j_operators(double psi) {
    const double c = std::cos(psi / 2);
    const double s = std::sin(psi / 2);
    const Matrix2cd jx = 0.5 * pauli::sigma_x();
    const Matrix2cd jy = 0.5 * pauli::sigma_y();
    return {c * jx - s * jy, s * jx + c * jy, 0.5 * pauli::sigma_z()};
}

Matrix2cd j_minus_alpha(double psi, double alpha_ratio) {
    if (!std::isfinite(alpha_ratio) || std::abs(alpha_ratio - 1) < 1e-12)
        throw SingularNormalizationError("j_minus_alpha: (1 - alpha^2)^{1/2} vanishes at alpha = 1");
    const RotatedSpin j = rotated_j_operators(psi);
    const std::complex<double> norm = std::sqrt(std::complex<double>(1 - alpha_ratio * alpha_ratio, 0.0));
    return (j.j1 - std::complex<double>(0, alpha_ratio) * j.j2) / norm;
}

FactorizationResiduals s_factorization_residuals(const BathParams& bath) {
    const Matrix2cd s = lindblad_s_operator(bath);
    const SqueezeFrame f = SqueezeFrame::from_bath(bath);
    const RotatedSpin j = rotated_j_operators(bath.psi());
    const double ch = std::sqrt(bath.n() + 1);
    const double sh = std::sqrt(bath.n());
    const Matrix2cd ladder =
        std::polar(ch - sh, bath.psi() / 2) * (j.j1 - std::complex<double>(0, f.alpha_ratio) * j.j2);
    const Matrix2cd factored = 2.0 * s_eigenvalue_plus(bath) * j_minus_alpha(bath.psi(), f.alpha_ratio);
    return {(s - ladder).cwiseAbs().maxCoeff(), (s - factored).cwiseAbs().maxCoeff()};
}

UncertaintyReport uncertainty_product(const PureState& state, double psi) {
    const RotatedSpin j = rotated_j_operators(psi);
    UncertaintyReport u;
    u.var_j1 = variance(state, j.j1);
    u.var_j2 = variance(state, j.j2);
    const double jz = state.matrix_element(j.jz).real();
    u.bound = jz * jz / 4;
    u.saturation_gap = u.var_j1 * u.var_j2 - u.bound;
    return u;
}

} // namespace zenolab
