#pragma once

#include <Eigen/Core>

#include <complex>
#include <utility>
#include <vector>

#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/schedule.hpp"

namespace squeezeprobe {

enum class BellPair { I, II };  // I: (|00>+-|11>)/sqrt2, II: (|01>+-|10>)/sqrt2

// Closed-form coherence factors for the ohmic continuum with switchable
// windows. All entry points require sched.t1_start == 0 (the closed forms are
// derived in that gauge); arbitrary start times are served by the mode oracle.

// kappa_j(t) = exp(-2 i eps_j t) * (1 + (w_c t_j(t))^2)^(-4 v alpha_j) with
// v = a (j = 1) or b (j = 2). Modulus is monotone nonincreasing in t.
std::complex<double> kappa_local(int j, double t, const Schedule& sched,
                                 const BathSpec& bath, const TwoModeCovariance& S);

// Standard-form nonlocal factor: f = R1^(4 c- sqrt(a1 a2)) *
// R2^(2 (c- - c+) sqrt(a1 a2)); strictly positive, 1 at t = 0. Uses only
// c+ and c- (the angle contribution lives in g_factor).
double f_factor(double t, const Schedule& sched, const BathSpec& bath,
                const TwoModeCovariance& S);

// Squeezing-angle factor multiplying f in the nonlocal coherences; exponential
// of arg-sums weighted by c12 and c21, equal to 1 whenever c12 = c21 = 0.
double g_factor(double t, const Schedule& sched, const BathSpec& bath,
                const TwoModeCovariance& S);

// (kappa12, lambda12) = (kappa1 kappa2 f g, kappa1 conj(kappa2) / (f g)).
// Moduli are assembled in log space, so the quotient never overflows even
// when f g underflows.
std::pair<std::complex<double>, std::complex<double>> nonlocal_coherences(
    double t, const Schedule& sched, const BathSpec& bath, const TwoModeCovariance& S);

// All four factors at one instant (single evaluation of the shared pieces).
struct CoherencePoint {
    std::complex<double> k1, k2, k12, l12;
};
CoherencePoint coherence_point(double t, const Schedule& sched, const BathSpec& bath,
                               const TwoModeCovariance& S);

// Time series of the four factors; evaluation is parallel over samples.
struct CoherenceTrace {
    std::vector<double> times;
    std::vector<std::complex<double>> kappa1, kappa2, kappa12, lambda12;
};
CoherenceTrace coherence_trace(const std::vector<double>& times, const Schedule& sched,
                               const BathSpec& bath, const TwoModeCovariance& S);

// Trace distance of the evolved Bell pair: |kappa12(t)| (pair I) or
// |lambda12(t)| (pair II); equals the pair's concurrence.
double bell_distance(double t, BellPair pair, const Schedule& sched,
                     const BathSpec& bath, const TwoModeCovariance& S);

// Reduced two-qubit state in the basis (|11>, |10>, |01>, |00>): diagonal
// |a_mn|^2, off-diagonals carry kappa2, kappa1, kappa12, lambda12. Unit trace,
// Hermitian, positive semidefinite (to -1e-10). Rejects non-normalized
// amplitudes.
Eigen::Matrix4cd reduced_density_matrix(double t, const QubitAmplitudes& amps,
                                        const Schedule& sched, const BathSpec& bath,
                                        const TwoModeCovariance& S);

}  // namespace squeezeprobe
