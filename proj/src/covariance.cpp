#include "squeezeprobe/covariance.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace squeezeprobe {

namespace {

constexpr double kPhysicalTol = 1e-10;  // smallest-eigenvalue slack
constexpr double kPptTol = 1e-9;        // symplectic-eigenvalue slack
constexpr double kPurityTol = 1e-9;

bool has_nan(const TwoModeCovariance& S) {
    return std::isnan(S.a) || std::isnan(S.b) || std::isnan(S.c_plus) ||
           std::isnan(S.c_minus) || std::isnan(S.c12) || std::isnan(S.c21);
}

Eigen::Matrix4d full_matrix(const TwoModeCovariance& S) {
    Eigen::Matrix4d m;
    // (q1, p1, q2, p2) ordering; see TwoModeCovariance.
    m << S.a, 0.0, S.c_plus, S.c12,
         0.0, S.a, S.c21, S.c_minus,
         S.c_plus, S.c21, S.b, 0.0,
         S.c12, S.c_minus, 0.0, S.b;
    return m;
}

void require_physical(const TwoModeCovariance& S, const char* who) {
    if (!validate_physical(S))
        throw std::domain_error(std::string(who) + ": covariance is not a physical state");
}

}  // namespace

TwoModeCovariance GaussianStateSpec::covariance() const {
    switch (kind) {
        case StateKind::STS: return sts_covariance(r, phi, n1, n2);
        case StateKind::EPR: return epr_covariance(r);
        case StateKind::MTS: return (n1 != 0.0 || n2 != 0.0) ? mts_covariance(n1, n2)
                                                             : mts_from_r(r);
        case StateKind::Custom: return custom;
    }
    throw std::logic_error("GaussianStateSpec: unknown kind");
}

std::string to_string(StateKind kind) {
    switch (kind) {
        case StateKind::STS: return "sts";
        case StateKind::EPR: return "epr";
        case StateKind::MTS: return "mts";
        case StateKind::Custom: return "custom";
    }
    return "?";
}

TwoModeCovariance sts_covariance(double r, double phi, double n1, double n2) {
    if (n1 < 0.0 || n2 < 0.0)
        throw std::invalid_argument("sts_covariance: mean photon numbers must be >= 0");
    const double ch = std::cosh(2.0 * r);
    const double sh = std::sinh(2.0 * r);
    // cosh^2 r = (cosh 2r + 1)/2, sinh^2 r = (cosh 2r - 1)/2: one cosh call,
    // no catastrophic growth beyond cosh(2r) itself.
    TwoModeCovariance S;
    S.a = 0.5 * (ch * (1.0 + n1 + n2) + n1 - n2);
    S.b = 0.5 * (ch * (1.0 + n1 + n2) + n2 - n1);
    S.c_plus = 0.5 * (1.0 + n1 + n2) * sh * std::cos(phi);
    S.c_minus = -S.c_plus;
    S.c12 = 0.5 * (1.0 + n1 + n2) * sh * std::sin(phi);
    S.c21 = S.c12;
    return S;
}

TwoModeCovariance epr_covariance(double r) { return sts_covariance(r, 0.0, 0.0, 0.0); }

TwoModeCovariance mts_covariance(double n1, double n2) {
    if (n1 < 0.0 || n2 < 0.0)
        throw std::invalid_argument("mts_covariance: mean photon numbers must be >= 0");
    TwoModeCovariance S;
    S.a = S.b = 0.5 * (n1 + n2 + 1.0);
    S.c_plus = S.c_minus = 0.5 * (n2 - n1);
    return S;
}

TwoModeCovariance mts_from_r(double r) { return mts_covariance(0.0, std::cosh(2.0 * r) - 1.0); }

bool validate_physical(const TwoModeCovariance& S) {
    if (has_nan(S)) return false;
    using cd = std::complex<double>;
    Eigen::Matrix4cd H = full_matrix(S).cast<cd>();
    const cd ih(0.0, 0.5);  // (i/2) Omega, Omega = [[0,1],[-1,0]] per mode
    H(0, 1) += ih;
    H(1, 0) -= ih;
    H(2, 3) += ih;
    H(3, 2) -= ih;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    return es.eigenvalues().minCoeff() >= -kPhysicalTol;
}

bool is_separable(const TwoModeCovariance& S) {
    require_physical(S, "is_separable");
    // Partial transposition flips the sign of p2, sending det C -> -det C.
    // The smaller symplectic eigenvalue of the transposed covariance obeys
    // 2 nu^2 = Dt - sqrt(Dt^2 - 4 det S), Dt = det A + det B - 2 det C.
    const double detA = S.a * S.a;
    const double detB = S.b * S.b;
    const double detC = S.c_plus * S.c_minus - S.c12 * S.c21;
    const double detS = full_matrix(S).determinant();
    const double delta = detA + detB - 2.0 * detC;
    const double disc = std::max(0.0, delta * delta - 4.0 * detS);
    const double nu_minus_sq = 0.5 * (delta - std::sqrt(disc));
    const double nu_minus = std::sqrt(std::max(0.0, nu_minus_sq));
    return nu_minus >= 0.5 - kPptTol;
}

double purity(const TwoModeCovariance& S) {
    require_physical(S, "purity");
    // Schur form of the 4x4 determinant, det(ab I - C^T C) with C the 2x2
    // cross block; evaluating it in scalars avoids the LU cancellation that
    // loses ~8 digits for strongly squeezed states.
    const double d1 = S.a * S.b - S.c_plus * S.c_plus - S.c21 * S.c21;
    const double d2 = S.a * S.b - S.c_minus * S.c_minus - S.c12 * S.c12;
    const double off = S.c_plus * S.c12 + S.c21 * S.c_minus;
    return 1.0 / (4.0 * std::sqrt(d1 * d2 - off * off));
}

double position_correlation(const TwoModeCovariance& S) {
    return S.c_plus / std::sqrt(S.a * S.b);
}

double pure_concurrence(const TwoModeCovariance& S) {
    if (std::fabs(purity(S) - 1.0) > kPurityTol)
        throw std::domain_error("pure_concurrence: state is not pure");
    const double K = position_correlation(S);
    return std::sqrt(1.0 - std::sqrt(std::max(0.0, 1.0 - K * K)));
}

double quadrature_variance(const TwoModeCovariance& S, int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("quadrature_variance: sign must be +1 or -1");
    return S.a + S.b + 2.0 * sign * S.c_plus;
}

double characteristic_value(const TwoModeCovariance& S,
                            const std::array<double, 4>& lambda) {
    require_physical(S, "characteristic_value");
    const double i1 = lambda[0], r1 = lambda[1], i2 = lambda[2], r2 = lambda[3];
    const double q = S.a * (i1 * i1 + r1 * r1) + S.b * (i2 * i2 + r2 * r2) +
                     2.0 * (S.c_plus * i1 * i2 + S.c_minus * r1 * r2 +
                            S.c12 * i1 * r2 + S.c21 * r1 * i2);
    return std::exp(-q);
}

TwoModeCovariance char_conjugate(const TwoModeCovariance& S) {
    TwoModeCovariance out = S;
    out.c12 = -S.c12;
    out.c21 = -S.c21;
    return out;
}

}  // namespace squeezeprobe
