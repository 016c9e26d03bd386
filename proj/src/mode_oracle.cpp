#include "squeezeprobe/mode_oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "squeezeprobe/numeric.hpp"
#include "squeezeprobe/parallel.hpp"

namespace squeezeprobe {

namespace {

using cd = std::complex<double>;

// Per-mode exponent of the Gaussian overlap for gamma = (pref1 b1, pref2 b2),
// quadratic form of the characteristic matrix in (Im, Re, Im, Re) ordering.
inline double overlap_exponent(const TwoModeCovariance& S, double pref1, double pref2,
                               cd b1, cd b2) {
    const double i1 = pref1 * b1.imag();
    const double r1 = pref1 * b1.real();
    const double i2 = pref2 * b2.imag();
    const double r2 = pref2 * b2.real();
    return S.a * (i1 * i1 + r1 * r1) + S.b * (i2 * i2 + r2 * r2) +
           2.0 * (S.c_plus * i1 * i2 + S.c_minus * r1 * r2 + S.c12 * i1 * r2 +
                  S.c21 * r1 * i2);
}

inline cd beta_value(double g_over_w, double w, double t_start, double t_window) {
    // (g/w) e^{i w t_start} (1 - e^{i w t_window})
    const cd shift(std::cos(w * t_start), std::sin(w * t_start));
    const cd open(1.0 - std::cos(w * t_window), -std::sin(w * t_window));
    return g_over_w * shift * open;
}

struct FactorSelect {
    double pref1, pref2;   // gamma prefactors
    double eps_coeff1, eps_coeff2;  // phase = t * (c1 eps1 + c2 eps2)
};

FactorSelect select(const ModeCoherenceRequest& rq) {
    auto par = [](int x) { return (x % 2 == 0) ? 1.0 : -1.0; };
    FactorSelect f;
    f.pref1 = par(rq.r) - par(rq.m);
    f.pref2 = par(rq.s) - par(rq.n);
    f.eps_coeff1 = par(rq.m) - par(rq.r);
    f.eps_coeff2 = par(rq.n) - par(rq.s);
    return f;
}

// One pass over the grid computing all four log-moduli (closed-form
// counterparts: k1, k2, k12, l12). Scratch buffers keep per-mode exponents so
// the final reduction is pairwise and order-fixed.
std::array<double, 4> log_moduli_all(double t, const Schedule& sched, const ModeGrid& grid,
                                     const TwoModeCovariance& S_char) {
    const std::size_t n = grid.omegas.size();
    std::vector<double> e1(n), e2(n), e12(n), el(n);
    const double w1 = interaction_time(sched, 1, t);
    const double w2 = interaction_time(sched, 2, t);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = grid.omegas[k];
        const cd b1 = beta_value(std::sqrt(grid.g1_sq[k]) / w, w, sched.t1_start, w1);
        const cd b2 = beta_value(std::sqrt(grid.g2_sq[k]) / w, w, sched.t2_start, w2);
        e1[k] = overlap_exponent(S_char, 2.0, 0.0, b1, b2);
        e2[k] = overlap_exponent(S_char, 0.0, 2.0, b1, b2);
        e12[k] = overlap_exponent(S_char, 2.0, 2.0, b1, b2);
        el[k] = overlap_exponent(S_char, 2.0, -2.0, b1, b2);
    }
    return {-pairwise_sum(e1), -pairwise_sum(e2), -pairwise_sum(e12), -pairwise_sum(el)};
}

}  // namespace

ModeGrid build_grid(const BathSpec& bath, int n_modes, double omega_max) {
    validate_bath(bath);
    if (n_modes < 2) throw std::invalid_argument("build_grid: n_modes must be >= 2");
    if (!(omega_max > 0.0)) throw std::invalid_argument("build_grid: omega_max must be > 0");
    ModeGrid grid;
    const std::size_t n = static_cast<std::size_t>(n_modes);
    grid.omegas.resize(n);
    grid.g1_sq.resize(n);
    grid.g2_sq.resize(n);
    const double dw = omega_max / static_cast<double>(n_modes);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (static_cast<double>(k) + 0.5) * dw;
        const double ohmic = w * std::exp(-w / bath.omega_c) * dw;
        grid.omegas[k] = w;
        grid.g1_sq[k] = bath.alpha1 * ohmic;
        grid.g2_sq[k] = bath.alpha2 * ohmic;
    }
    return grid;
}

std::complex<double> beta_coefficient(const ModeGrid& grid, int j, std::size_t k,
                                      double t, const Schedule& sched) {
    if (j != 1 && j != 2) throw std::invalid_argument("beta_coefficient: j must be 1 or 2");
    if (k >= grid.omegas.size()) throw std::out_of_range("beta_coefficient: mode index");
    const double w = grid.omegas[k];
    const double gsq = (j == 1) ? grid.g1_sq[k] : grid.g2_sq[k];
    const double start = (j == 1) ? sched.t1_start : sched.t2_start;
    return beta_value(std::sqrt(gsq) / w, w, start, interaction_time(sched, j, t));
}

ModeCoherenceRequest make_request(CoherenceFactor which, double t,
                                  const Schedule& sched, const GaussianStateSpec& state) {
    ModeCoherenceRequest rq;
    rq.t = t;
    rq.schedule = sched;
    rq.state = state;
    switch (which) {
        case CoherenceFactor::K1: rq.m = 1; break;
        case CoherenceFactor::K2: rq.n = 1; break;
        case CoherenceFactor::K12: rq.m = 1; rq.n = 1; break;
        case CoherenceFactor::L12: rq.s = 1; rq.m = 1; break;
    }
    return rq;
}

double oracle_log_modulus(double pref1, double pref2, double t, const Schedule& sched,
                          const ModeGrid& grid, const TwoModeCovariance& S_char) {
    const std::size_t n = grid.omegas.size();
    std::vector<double> expo(n);
    const double w1 = interaction_time(sched, 1, t);
    const double w2 = interaction_time(sched, 2, t);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = grid.omegas[k];
        const cd b1 = beta_value(std::sqrt(grid.g1_sq[k]) / w, w, sched.t1_start, w1);
        const cd b2 = beta_value(std::sqrt(grid.g2_sq[k]) / w, w, sched.t2_start, w2);
        expo[k] = overlap_exponent(S_char, pref1, pref2, b1, b2);
    }
    return -pairwise_sum(expo);
}

std::complex<double> oracle_coherence(const ModeCoherenceRequest& rq,
                                      const ModeGrid& grid, const BathSpec& bath) {
    validate_schedule(rq.schedule);
    for (int idx : {rq.r, rq.s, rq.m, rq.n})
        if (idx != 0 && idx != 1)
            throw std::invalid_argument("oracle_coherence: indices must be 0 or 1");
    const TwoModeCovariance S = rq.state.covariance();
    if (!validate_physical(S)) throw std::domain_error("oracle_coherence: unphysical state");
    const FactorSelect sel = select(rq);
    const double ln_mod = oracle_log_modulus(sel.pref1, sel.pref2, rq.t, rq.schedule, grid,
                                             char_conjugate(S));
    const double phase = rq.t * (sel.eps_coeff1 * bath.eps1 + sel.eps_coeff2 * bath.eps2);
    return std::exp(ln_mod) * cd(std::cos(phase), std::sin(phase));
}

CoherenceTrace oracle_trace(const std::vector<double>& times, const Schedule& sched,
                            const BathSpec& bath, const GaussianStateSpec& state,
                            const OracleOptions& opts) {
    validate_schedule(sched);
    const TwoModeCovariance S = state.covariance();
    if (!validate_physical(S)) throw std::domain_error("oracle_trace: unphysical state");
    const ModeGrid grid = build_grid(bath, opts.n_modes, opts.omega_max);
    const TwoModeCovariance Sc = char_conjugate(S);
    CoherenceTrace tr;
    tr.times = times;
    const std::size_t n = times.size();
    tr.kappa1.resize(n);
    tr.kappa2.resize(n);
    tr.kappa12.resize(n);
    tr.lambda12.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const double t = times[i];
        const std::array<double, 4> lm = log_moduli_all(t, sched, grid, Sc);
        auto polar = [](double ln_mod, double ph) {
            return std::exp(ln_mod) * cd(std::cos(ph), std::sin(ph));
        };
        tr.kappa1[i] = polar(lm[0], -2.0 * bath.eps1 * t);
        tr.kappa2[i] = polar(lm[1], -2.0 * bath.eps2 * t);
        tr.kappa12[i] = polar(lm[2], -2.0 * (bath.eps1 + bath.eps2) * t);
        tr.lambda12[i] = polar(lm[3], -2.0 * (bath.eps1 - bath.eps2) * t);
    });
    return tr;
}

DeviationReport compare_with_closed_form(const Schedule& sched, const BathSpec& bath,
                                         const GaussianStateSpec& state,
                                         const std::vector<double>& times,
                                         double tolerance, const OracleOptions& opts) {
    if (sched.t1_start != 0.0)
        throw std::invalid_argument("compare_with_closed_form: closed forms need t1_start = 0");
    const TwoModeCovariance S = state.covariance();
    const CoherenceTrace closed = coherence_trace(times, sched, bath, S);
    const CoherenceTrace sum = oracle_trace(times, sched, bath, state, opts);
    DeviationReport rep;
    rep.tolerance = tolerance;
    for (std::size_t i = 0; i < times.size(); ++i) {
        auto dev = [&](const std::vector<cd>& a, const std::vector<cd>& b) {
            return std::fabs(std::abs(a[i]) - std::abs(b[i]));
        };
        rep.dev_k1 = std::max(rep.dev_k1, dev(sum.kappa1, closed.kappa1));
        rep.dev_k2 = std::max(rep.dev_k2, dev(sum.kappa2, closed.kappa2));
        rep.dev_k12 = std::max(rep.dev_k12, dev(sum.kappa12, closed.kappa12));
        rep.dev_l12 = std::max(rep.dev_l12, dev(sum.lambda12, closed.lambda12));
    }
    rep.max_dev = std::max({rep.dev_k1, rep.dev_k2, rep.dev_k12, rep.dev_l12});
    rep.pass = rep.max_dev <= tolerance;
    return rep;
}

}  // namespace squeezeprobe
