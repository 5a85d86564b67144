#pragma once

// Single-Lindblad picture of the maximally squeezed bath: eigensystem of S, the
// bath-aligned spin operators J1/J2, the non-Hermitian J_-(alpha) and the
// Heisenberg-saturation test Var(J1) Var(J2) = |<Jz>|^2 / 4.

#include <complex>

#include "zenolab/bath.hpp"
#include "zenolab/pauli.hpp"

namespace zenolab {

/// Squeeze amplitude r (cosh r = sqrt(N+1), sinh r = sqrt(N)), phase psi and
/// the ratio alpha = (cosh r + sinh r)/(cosh r - sinh r) = e^{2r}.
struct SqueezeFrame {
    double r;
    double psi;
    double alpha_ratio;

    static SqueezeFrame from_bath(const BathParams& bath);
};

struct SEigensystem {
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    PureState plus;
    PureState minus;
    // N = 0: S = sigma is nilpotent; only |-> is an eigenvector, with eigenvalue 0.
    bool degenerate{false};
};

// lambda_+- = +- i sqrt(M) e^{i psi/2}
std::complex<double> s_eigenvalue_plus(const BathParams& bath);

// Numerical diagonalization of S. Labels: lambda_+ is the eigenvalue with
// Im(lambda e^{-i psi/2}) > 0. Eigenvectors carry a real non-negative |+> amplitude.
SEigensystem s_eigensystem(const BathParams& bath);

struct RotatedSpin {
    Matrix2cd j1;
    Matrix2cd j2;
    Matrix2cd jz;
};

// J1 = cos(psi/2) Jx - sin(psi/2) Jy, J2 = sin(psi/2) Jx + cos(psi/2) Jy, J_k = sigma_k / 2.
RotatedSpin rotated_j_operators(double psi);

// (J1 - i alpha J2) / (1 - alpha^2)^{1/2}, principal branch (+i sqrt(alpha^2 - 1) for alpha > 1).
Matrix2cd j_minus_alpha(double psi, double alpha_ratio);

struct FactorizationResiduals {
    // max |S - e^{i psi/2}(cosh r - sinh r)(J1 - i alpha J2)|
    double ladder_form;
    // max |S - 2 lambda_+ J_-(alpha)|
    double j_minus_form;
};

FactorizationResiduals s_factorization_residuals(const BathParams& bath);

struct UncertaintyReport {
    double var_j1;
    double var_j2;
    double bound;          // |<Jz>|^2 / 4
    double saturation_gap; // var_j1 * var_j2 - bound
};

UncertaintyReport uncertainty_product(const PureState& state, double psi);

} // namespace zenolab
