#include "squeezeprobe/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "squeezeprobe/parallel.hpp"

namespace squeezeprobe {

namespace {

using cd = std::complex<double>;

void require_closed_form_schedule(const Schedule& sched) {
    validate_schedule(sched);
    if (sched.t1_start != 0.0)
        throw std::invalid_argument(
            "closed-form coherences require t1_start = 0; use the mode oracle for "
            "shifted first windows");
}

double arg2(double re, double im) { return std::atan2(im, re); }

// Shared per-instant quantities, all in log space. No input validation here;
// public entry points validate once.
struct Parts {
    double t1, t2;          // accumulated interaction times
    double ln_k1, ln_k2;    // ln moduli of the local factors
    double ln_fg;           // ln(f) + ln(g)
    double ln_f, ln_g;
};

Parts parts(double t, const Schedule& sched, const BathSpec& bath,
            const TwoModeCovariance& S) {
    const double wc = bath.omega_c;
    Parts p;
    p.t1 = interaction_time(sched, 1, t);
    p.t2 = interaction_time(sched, 2, t);
    p.ln_k1 = -4.0 * S.a * bath.alpha1 * std::log1p((wc * p.t1) * (wc * p.t1));
    p.ln_k2 = -4.0 * S.b * bath.alpha2 * std::log1p((wc * p.t2) * (wc * p.t2));

    const double sq = std::sqrt(bath.alpha1 * bath.alpha2);
    const double t2s = sched.t2_start;
    const double A = p.t2 + t2s;  // window-2 clock measured from t = 0

    auto l1p = [wc](double x) { return std::log1p((wc * x) * (wc * x)); };
    const double lnR1 = l1p(t2s) + l1p(p.t1 - p.t2 - t2s) - l1p(p.t1 - t2s) - l1p(A);
    const double lnR2 = l1p(p.t1 - t2s) + l1p(A + p.t1) - l1p(p.t1 + t2s) - l1p(A - p.t1);
    p.ln_f = 4.0 * S.c_minus * sq * lnR1 + 2.0 * (S.c_minus - S.c_plus) * sq * lnR2;

    p.ln_g = 0.0;
    if (S.c12 != 0.0 || S.c21 != 0.0) {
        const double wc2 = wc * wc;
        double s12 = 0.0;
        double s21 = 2.0 * (arg2(1.0, wc * t2s) - arg2(1.0, wc * A));
        for (int k = 0; k < 2; ++k) {
            const double sgn = (k == 0) ? 1.0 : -1.0;
            s12 += arg2(1.0 + (wc * A) * (wc * A) + sgn * wc2 * A * p.t1, wc * p.t1) -
                   arg2(1.0 + (wc * t2s) * (wc * t2s) + sgn * wc2 * t2s * p.t1, wc * p.t1);
            s21 += arg2(1.0 + (wc * p.t1) * (wc * p.t1) + sgn * wc2 * A * p.t1, wc * A) -
                   arg2(1.0 + (wc * p.t1) * (wc * p.t1) + sgn * wc2 * t2s * p.t1, wc * t2s);
        }
        p.ln_g = 4.0 * sq * (S.c12 * s12 + S.c21 * s21);
    }
    p.ln_fg = p.ln_f + p.ln_g;
    return p;
}

cd polar_exp(double ln_mod, double phase) {
    return std::exp(ln_mod) * cd(std::cos(phase), std::sin(phase));
}

CoherencePoint assemble(double t, const BathSpec& bath, const Parts& p) {
    CoherencePoint c;
    c.k1 = polar_exp(p.ln_k1, -2.0 * bath.eps1 * t);
    c.k2 = polar_exp(p.ln_k2, -2.0 * bath.eps2 * t);
    c.k12 = polar_exp(p.ln_k1 + p.ln_k2 + p.ln_fg, -2.0 * (bath.eps1 + bath.eps2) * t);
    c.l12 = polar_exp(p.ln_k1 + p.ln_k2 - p.ln_fg, -2.0 * (bath.eps1 - bath.eps2) * t);
    return c;
}

}  // namespace

Schedule consecutive_windows(double dt, double gap) {
    if (!(dt > 0.0)) throw std::invalid_argument("consecutive_windows: dt must be > 0");
    if (!(gap >= 0.0)) throw std::invalid_argument("consecutive_windows: gap must be >= 0");
    return Schedule{0.0, dt, dt + gap, 2.0 * dt + gap};
}

void validate_schedule(const Schedule& s) {
    if (s.t1_start < 0.0 || s.t2_start < 0.0)
        throw std::invalid_argument("schedule: start times must be >= 0");
    if (s.t1_end < s.t1_start || s.t2_end < s.t2_start)
        throw std::invalid_argument("schedule: each window must be well ordered");
    if (s.t2_start < s.t1_start)
        throw std::invalid_argument("schedule: window 1 must open first (t1_start <= t2_start)");
}

void validate_bath(const BathSpec& b) {
    if (!(b.alpha1 > 0.0) || !(b.alpha2 > 0.0) || !(b.omega_c > 0.0))
        throw std::invalid_argument("bath: alpha1, alpha2, omega_c must be > 0");
}

double interaction_time(const Schedule& sched, int j, double t) {
    if (j != 1 && j != 2) throw std::invalid_argument("interaction_time: j must be 1 or 2");
    const double start = (j == 1) ? sched.t1_start : sched.t2_start;
    const double end = (j == 1) ? sched.t1_end : sched.t2_end;
    return std::clamp(t - start, 0.0, end - start);
}

double QubitAmplitudes::norm_sq() const {
    return std::norm(a00) + std::norm(a01) + std::norm(a10) + std::norm(a11);
}

std::complex<double> kappa_local(int j, double t, const Schedule& sched,
                                 const BathSpec& bath, const TwoModeCovariance& S) {
    if (j != 1 && j != 2) throw std::invalid_argument("kappa_local: j must be 1 or 2");
    require_closed_form_schedule(sched);
    validate_bath(bath);
    if (!validate_physical(S)) throw std::domain_error("kappa_local: unphysical covariance");
    const Parts p = parts(t, sched, bath, S);
    return (j == 1) ? polar_exp(p.ln_k1, -2.0 * bath.eps1 * t)
                    : polar_exp(p.ln_k2, -2.0 * bath.eps2 * t);
}

double f_factor(double t, const Schedule& sched, const BathSpec& bath,
                const TwoModeCovariance& S) {
    require_closed_form_schedule(sched);
    validate_bath(bath);
    return std::exp(parts(t, sched, bath, S).ln_f);
}

double g_factor(double t, const Schedule& sched, const BathSpec& bath,
                const TwoModeCovariance& S) {
    require_closed_form_schedule(sched);
    validate_bath(bath);
    return std::exp(parts(t, sched, bath, S).ln_g);
}

std::pair<std::complex<double>, std::complex<double>> nonlocal_coherences(
    double t, const Schedule& sched, const BathSpec& bath, const TwoModeCovariance& S) {
    require_closed_form_schedule(sched);
    validate_bath(bath);
    if (!validate_physical(S))
        throw std::domain_error("nonlocal_coherences: unphysical covariance");
    const CoherencePoint c = assemble(t, bath, parts(t, sched, bath, S));
    return {c.k12, c.l12};
}

CoherencePoint coherence_point(double t, const Schedule& sched, const BathSpec& bath,
                               const TwoModeCovariance& S) {
    require_closed_form_schedule(sched);
    validate_bath(bath);
    return assemble(t, bath, parts(t, sched, bath, S));
}

CoherenceTrace coherence_trace(const std::vector<double>& times, const Schedule& sched,
                               const BathSpec& bath, const TwoModeCovariance& S) {
    require_closed_form_schedule(sched);
    validate_bath(bath);
    if (!validate_physical(S))
        throw std::domain_error("coherence_trace: unphysical covariance");
    CoherenceTrace tr;
    tr.times = times;
    const std::size_t n = times.size();
    tr.kappa1.resize(n);
    tr.kappa2.resize(n);
    tr.kappa12.resize(n);
    tr.lambda12.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const CoherencePoint c = assemble(times[i], bath, parts(times[i], sched, bath, S));
        tr.kappa1[i] = c.k1;
        tr.kappa2[i] = c.k2;
        tr.kappa12[i] = c.k12;
        tr.lambda12[i] = c.l12;
    });
    return tr;
}

double bell_distance(double t, BellPair pair, const Schedule& sched,
                     const BathSpec& bath, const TwoModeCovariance& S) {
    require_closed_form_schedule(sched);
    validate_bath(bath);
    const Parts p = parts(t, sched, bath, S);
    const double ln_mod = (pair == BellPair::I) ? p.ln_k1 + p.ln_k2 + p.ln_fg
                                                : p.ln_k1 + p.ln_k2 - p.ln_fg;
    return std::exp(ln_mod);
}

Eigen::Matrix4cd reduced_density_matrix(double t, const QubitAmplitudes& amps,
                                        const Schedule& sched, const BathSpec& bath,
                                        const TwoModeCovariance& S) {
    if (std::fabs(amps.norm_sq() - 1.0) > 1e-9)
        throw std::invalid_argument("reduced_density_matrix: amplitudes must be normalized");
    const CoherencePoint c = coherence_point(t, sched, bath, S);
    const cd a11 = amps.a11, a10 = amps.a10, a01 = amps.a01, a00 = amps.a00;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    // Basis order (|11>, |10>, |01>, |00>). A flipped first qubit contributes
    // kappa1, a flipped second qubit kappa2; double flips carry kappa12 or
    // lambda12 depending on whether the flips are parallel or opposing.
    rho(0, 0) = std::norm(a11);
    rho(1, 1) = std::norm(a10);
    rho(2, 2) = std::norm(a01);
    rho(3, 3) = std::norm(a00);
    rho(0, 1) = a11 * std::conj(a10) * c.k2;
    rho(0, 2) = a11 * std::conj(a01) * c.k1;
    rho(0, 3) = a11 * std::conj(a00) * c.k12;
    rho(1, 2) = a10 * std::conj(a01) * c.l12;
    rho(1, 3) = a10 * std::conj(a00) * c.k1;
    rho(2, 3) = a01 * std::conj(a00) * c.k2;
    for (int i = 0; i < 4; ++i)
        for (int k = i + 1; k < 4; ++k) rho(k, i) = std::conj(rho(i, k));
    return rho;
}

}  // namespace squeezeprobe
