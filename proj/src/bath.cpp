#include "zenolab/bath.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace zenolab {

namespace {

void require_maximal(const BathParams& bath, const char* what) {
    if (!bath.is_maximal())
        throw UnsupportedParameterError(std::string(what) +
                                        ": single-Lindblad form requires M = sqrt(N(N+1)), got M = " +
                                        std::to_string(bath.m()));
}

} // namespace

BathParams::BathParams(double gamma, double n, double m, double psi) : gamma_(gamma), n_(n), m_(m) {
    if (!std::isfinite(gamma) || gamma <= 0) throw ParameterError("bath: gamma must be positive");
    if (!std::isfinite(n) || n < 0) throw ParameterError("bath: N must be non-negative");
    if (!std::isfinite(m) || m < 0) throw ParameterError("bath: M must be non-negative");
    if (m > std::sqrt(n * (n + 1)) + 1e-12)
        throw ParameterError("bath: M = " + std::to_string(m) + " exceeds sqrt(N(N+1)) (unphysical squeezing)");
    if (!std::isfinite(psi)) throw ParameterError("bath: psi must be finite");
    constexpr double two_pi = 2 * std::numbers::pi;
    psi_ = std::fmod(psi, two_pi);
    if (psi_ < 0) psi_ += two_pi;
    if (psi_ >= two_pi) psi_ = 0;
}

BathParams BathParams::maximal(double gamma, double n, double psi) {
    if (!std::isfinite(n) || n < 0) throw ParameterError("bath: N must be non-negative");
    return BathParams(gamma, n, std::sqrt(n * (n + 1)), psi);
}

double BathParams::maximal_m() const { return std::sqrt(n_ * (n_ + 1)); }

bool BathParams::is_maximal(double tol) const { return std::abs(m_ - maximal_m()) <= tol; }

double BathParams::squeeze_amplitude() const { return std::asinh(std::sqrt(n_)); }

Eigen::Matrix4d BlochRates::affine_generator() const {
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    g.topLeftCorner<3, 3>() = drift;
    g.topRightCorner<3, 1>() = offset;
    return g;
}

Matrix2cd liouvillian(const BathParams& bath, const Matrix2cd& x) {
    const Matrix2cd sm = pauli::lowering();
    const Matrix2cd sp = pauli::raising();
    const Matrix2cd spsm = sp * sm;
    const Matrix2cd smsp = sm * sp;
    const double g = bath.gamma();
    const std::complex<double> squeeze = g * bath.m() * std::polar(1.0, bath.psi());

    Matrix2cd out = 0.5 * g * (bath.n() + 1) * (2.0 * sm * x * sp - spsm * x - x * spsm);
    out += 0.5 * g * bath.n() * (2.0 * sp * x * sm - smsp * x - x * smsp);
    out -= squeeze * (sp * x * sp);
    out -= std::conj(squeeze) * (sm * x * sm);
    return out;
}

Matrix2cd liouvillian(const BathParams& bath, const DensityMatrix& rho) { return liouvillian(bath, rho.matrix()); }

Matrix2cd lindblad_s_operator(const BathParams& bath) {
    require_maximal(bath, "lindblad_s_operator");
    return std::sqrt(bath.n() + 1) * pauli::lowering() -
           std::sqrt(bath.n()) * std::polar(1.0, bath.psi()) * pauli::raising();
}

Matrix2cd liouvillian_from_s(const BathParams& bath, const Matrix2cd& x) {
    require_maximal(bath, "liouvillian_from_s");
    const Matrix2cd s = lindblad_s_operator(bath);
    const Matrix2cd sds = s.adjoint() * s;
    return 0.5 * bath.gamma() * (2.0 * s * x * s.adjoint() - x * sds - sds * x);
}

Matrix2cd liouvillian_from_s(const BathParams& bath, const DensityMatrix& rho) {
    return liouvillian_from_s(bath, rho.matrix());
}

BlochRates bloch_rates(const BathParams& bath) {
    BlochRates rates;
    rates.offset = 0.5 * pauli_components<double>(liouvillian(bath, pauli::identity()));
    const Matrix2cd basis[3] = {pauli::sigma_x(), pauli::sigma_y(), pauli::sigma_z()};
    for (int k = 0; k < 3; ++k) rates.drift.col(k) = 0.5 * pauli_components<double>(liouvillian(bath, basis[k]));
    return rates;
}

} // namespace zenolab
