#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/schedule.hpp"

namespace squeezeprobe {

// Short-time approximate dynamics: second-order cumulant expansion of the
// dephasing influence functional, valid for omega_c * t << 1, plus the
// quadrature-correlation condition that decides when a pair rephases.

// Second-order cumulants of one collective bath quadrature.
struct CumulantSpec {
    double mean = 0.0;         // <A>
    double variance = 0.0;     // <<A^2>>, must be >= 0
    double correlation = 0.0;  // normalized cross-correlation, in [-1, 1]
};

// F(t) = exp(i*mean*t - variance*t^2/2); |F| = 1 iff variance = 0.
std::complex<double> cumulant_decoherence(const CumulantSpec& spec, double t);

// Cumulants of the quadrature seen by window j (1 or 2): zero mean,
// variance 8*alpha*omega_c^2*(a or b), cross-correlation +-c_plus/sqrt(ab)
// with + for pair II and - for pair I.
CumulantSpec window_cumulants(const TwoModeCovariance& S, int j, double alpha,
                              double omega_c, BellPair pair = BellPair::II);

// Normalized cross-correlation of the two window quadratures: +-c_plus/sqrt(ab).
double correlation_coefficient(const TwoModeCovariance& S, BellPair pair);

// Gaussian approximants of the nonlocal coherence moduli at global time t:
//   kappa12 = exp[-4*alpha*omega_c^2*(a*(t1^2+t2^2) + 2*c_plus*t1*t2)]
//   lambda12 = exp[-4*alpha*omega_c^2*(a*(t1^2+t2^2) - 2*c_plus*t1*t2)]
// with t1, t2 the elapsed in-window times. Both couplings must equal alpha.
std::pair<double, double> approx_coherences(double t, const Schedule& sched, double alpha,
                                            double omega_c, const TwoModeCovariance& S);

// Single-window modulus exp(-4*alpha*omega_c^2*(a or b)*t_j^2) at global time t.
double approx_local(double t, const Schedule& sched, int j, double alpha, double omega_c,
                    const TwoModeCovariance& S);

// Trace of the approximants on a time grid, shaped like CoherenceTrace so it
// serializes to the same CSV schema (all phases are zero here).
CoherenceTrace approx_trace(const std::vector<double>& times, const Schedule& sched,
                            double alpha, double omega_c, const TwoModeCovariance& S);

// Rephasing condition 1 -+ c_plus/a << 1/2: value = 1 - c_plus/a for pair II,
// 1 + c_plus/a for pair I; satisfied when value < threshold.
struct RephasingCondition {
    double value = 0.0;
    bool satisfied = false;
    double threshold = 0.0;
};

RephasingCondition rephasing_condition(const TwoModeCovariance& S, BellPair pair,
                                       double threshold = 0.1);

// The raw moments behind the condition: (<(q1 +- q2)^2>, <q1^2>).
std::pair<double, double> variance_form(const TwoModeCovariance& S, int sign);

}  // namespace squeezeprobe
