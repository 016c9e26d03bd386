#include "squeezeprobe/approx.hpp"

#include <cmath>
#include <stdexcept>

#include "squeezeprobe/parallel.hpp"

namespace squeezeprobe {

namespace {

double pair_sign(BellPair pair) {
    // Pair II couples through A1 - A2 (rephasing when c_plus > 0), pair I
    // through A1 + A2.
    return pair == BellPair::II ? 1.0 : -1.0;
}

void check_inputs(const Schedule& sched, double alpha, double omega_c,
                  const TwoModeCovariance& S) {
    validate_schedule(sched);
    if (!(alpha > 0.0) || !(omega_c > 0.0)) {
        throw std::invalid_argument("approx: alpha and omega_c must be positive");
    }
    if (!validate_physical(S)) {
        throw std::invalid_argument("approx: covariance violates the uncertainty bound");
    }
}

}  // namespace

std::complex<double> cumulant_decoherence(const CumulantSpec& spec, double t) {
    if (spec.variance < 0.0) {
        throw std::invalid_argument("cumulant_decoherence: variance must be >= 0");
    }
    if (!(t >= 0.0)) {
        throw std::invalid_argument("cumulant_decoherence: t must be >= 0");
    }
    return std::polar(std::exp(-0.5 * spec.variance * t * t), spec.mean * t);
}

double correlation_coefficient(const TwoModeCovariance& S, BellPair pair) {
    return pair_sign(pair) * S.c_plus / std::sqrt(S.a * S.b);
}

CumulantSpec window_cumulants(const TwoModeCovariance& S, int j, double alpha,
                              double omega_c, BellPair pair) {
    if (j != 1 && j != 2) {
        throw std::invalid_argument("window_cumulants: window index must be 1 or 2");
    }
    CumulantSpec spec;
    spec.mean = 0.0;
    spec.variance = 8.0 * alpha * omega_c * omega_c * (j == 1 ? S.a : S.b);
    spec.correlation = correlation_coefficient(S, pair);
    return spec;
}

std::pair<double, double> approx_coherences(double t, const Schedule& sched, double alpha,
                                            double omega_c, const TwoModeCovariance& S) {
    check_inputs(sched, alpha, omega_c, S);
    const double t1 = interaction_time(sched, 1, t);
    const double t2 = interaction_time(sched, 2, t);
    const double scale = 4.0 * alpha * omega_c * omega_c;
    const double diag = S.a * (t1 * t1 + t2 * t2);
    const double cross = 2.0 * S.c_plus * t1 * t2;
    const double kappa12 = std::exp(-scale * (diag + cross));
    const double lambda12 = std::exp(-scale * (diag - cross));
    return {kappa12, lambda12};
}

double approx_local(double t, const Schedule& sched, int j, double alpha, double omega_c,
                    const TwoModeCovariance& S) {
    if (j != 1 && j != 2) {
        throw std::invalid_argument("approx_local: window index must be 1 or 2");
    }
    check_inputs(sched, alpha, omega_c, S);
    const double tj = interaction_time(sched, j, t);
    const double var = j == 1 ? S.a : S.b;
    return std::exp(-4.0 * alpha * omega_c * omega_c * var * tj * tj);
}

CoherenceTrace approx_trace(const std::vector<double>& times, const Schedule& sched,
                            double alpha, double omega_c, const TwoModeCovariance& S) {
    check_inputs(sched, alpha, omega_c, S);
    CoherenceTrace trace;
    trace.times = times;
    trace.kappa1.resize(times.size());
    trace.kappa2.resize(times.size());
    trace.kappa12.resize(times.size());
    trace.lambda12.resize(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
        trace.kappa1[i] = approx_local(times[i], sched, 1, alpha, omega_c, S);
        trace.kappa2[i] = approx_local(times[i], sched, 2, alpha, omega_c, S);
        const auto [k12, l12] = approx_coherences(times[i], sched, alpha, omega_c, S);
        trace.kappa12[i] = k12;
        trace.lambda12[i] = l12;
    });
    return trace;
}

RephasingCondition rephasing_condition(const TwoModeCovariance& S, BellPair pair,
                                       double threshold) {
    RephasingCondition out;
    out.value = 1.0 - pair_sign(pair) * S.c_plus / S.a;
    out.threshold = threshold;
    out.satisfied = out.value < threshold;
    return out;
}

std::pair<double, double> variance_form(const TwoModeCovariance& S, int sign) {
    return {quadrature_variance(S, sign), S.a};
}

}  // namespace squeezeprobe
