#pragma once

#include <array>
#include <string>

namespace squeezeprobe {

// Second moments of a zero-mean two-mode Gaussian state, vacuum variance 1/2.
// Ordering convention for the full 4x4 matrix is (q1, p1, q2, p2):
//
//        [ a    0    c+   c12 ]
//        [ 0    a    c21  c-  ]
//        [ c+   c21  b    0   ]
//        [ c12  c-   0    b   ]
//
// a, b are per-mode quadrature variances (isotropic within a mode for every
// state this library constructs); c+, c- couple q1q2 / p1p2; c12, c21 are the
// q-p cross covariances that appear for nonzero squeezing angle.
struct TwoModeCovariance {
    double a = 0.5;
    double b = 0.5;
    double c_plus = 0.0;
    double c_minus = 0.0;
    double c12 = 0.0;
    double c21 = 0.0;
};

enum class StateKind { STS, EPR, MTS, Custom };

// Parametric description of the per-mode-pair environment state.
struct GaussianStateSpec {
    StateKind kind = StateKind::EPR;
    double r = 0.0;    // squeezing parameter
    double phi = 0.0;  // squeezing angle, radians
    double n1 = 0.0;   // mean photon number, mode 1
    double n2 = 0.0;   // mean photon number, mode 2
    TwoModeCovariance custom{};  // used only when kind == Custom

    TwoModeCovariance covariance() const;
};

std::string to_string(StateKind kind);

// Squeezed thermal state. a = cosh(2r)/2 + n1 cosh^2 r + n2 sinh^2 r (and b
// with n1, n2 swapped), c+ = (1+n1+n2) sinh(2r) cos(phi)/2 = -c-,
// c12 = c21 = (1+n1+n2) sinh(2r) sin(phi)/2. Rejects negative photon numbers.
TwoModeCovariance sts_covariance(double r, double phi, double n1, double n2);

// Two-mode squeezed vacuum (twin beam): sts_covariance(r, 0, 0, 0).
TwoModeCovariance epr_covariance(double r);

// Two-mode thermal state mixed on a balanced beam splitter:
// a = b = (n1+n2+1)/2, c+ = c- = (n2-n1)/2. Rejects negative photon numbers.
TwoModeCovariance mts_covariance(double n1, double n2);

// mts_covariance(0, cosh(2r)-1): a = b = cosh(2r)/2, c+ = c- = (cosh(2r)-1)/2.
TwoModeCovariance mts_from_r(double r);

// Uncertainty-relation check: S + (i/2) Omega >= 0 as a Hermitian matrix,
// with tolerance -1e-10 on the smallest eigenvalue. NaN entries give false.
bool validate_physical(const TwoModeCovariance& S);

// Positivity under partial transposition, evaluated through the symplectic
// eigenvalues of the mode-2-transposed covariance; exact iff test for
// two-mode Gaussian states. Rejects unphysical input.
bool is_separable(const TwoModeCovariance& S);

// Tr(rho^2) = 1 / (4 sqrt(det S)); in (0, 1]. Rejects unphysical input.
double purity(const TwoModeCovariance& S);

// Position correlation coefficient K = c+ / sqrt(a b), in [-1, 1].
double position_correlation(const TwoModeCovariance& S);

// Concurrence of the pure two-mode state with correlation K:
// sqrt(1 - sqrt(1 - K^2)). Rejects states whose purity deviates from 1 by
// more than 1e-9.
double pure_concurrence(const TwoModeCovariance& S);

// <(q1 +/- q2)^2> = a + b +/- 2 c+ for sign = +1 / -1.
double quadrature_variance(const TwoModeCovariance& S, int sign);

// Gaussian characteristic-function value exp(-lambda^T S_char lambda) for a
// zero-mean state, with lambda ordered as (Im g1, Re g1, Im g2, Re g2). The
// matrix is used exactly as passed: callers evaluating coherence overlaps for
// nonzero squeezing angle must pass char_conjugate(S) (the angle-sign flip
// induced by reordering quadratures to (q1, -p1, q2, -p2)). Rejects
// unphysical S.
double characteristic_value(const TwoModeCovariance& S,
                            const std::array<double, 4>& lambda);

// The covariance entering characteristic-function overlaps: c12, c21 negated
// (equivalently phi -> -phi). Involution; identity on standard-form states.
TwoModeCovariance char_conjugate(const TwoModeCovariance& S);

}  // namespace squeezeprobe
