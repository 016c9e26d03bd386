#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/schedule.hpp"

namespace squeezeprobe {

// Brute-force evaluation of the coherence factors by explicit summation over
// a discretized ohmic mode continuum. Validates the closed forms and covers
// shifted first windows (t1_start > 0), which the closed forms exclude.

// Midpoint-rule discretization of both baths on (0, omega_max]: equal
// frequency ladders, per-bath weights g_sq_k = J_j(omega_k) * d_omega.
struct ModeGrid {
    std::vector<double> omegas;
    std::vector<double> g1_sq, g2_sq;
};

ModeGrid build_grid(const BathSpec& bath, int n_modes, double omega_max);

struct OracleOptions {
    int n_modes = 20000;
    double omega_max = 40.0;
};

// Displacement amplitude accumulated by mode k of bath j:
// (g_k / omega_k) * exp(i omega_k t_j_start) * (1 - exp(i omega_k t_j(t))).
std::complex<double> beta_coefficient(const ModeGrid& grid, int j, std::size_t k,
                                      double t, const Schedule& sched);

// Overlap selector: indices (r, s, m, n) pick the environment overlap
// <eta^{rs}|eta^{mn}>, entering with gamma1 = ((-1)^r - (-1)^m) beta1 and
// gamma2 = ((-1)^s - (-1)^n) beta2. (0,0,1,0) -> kappa1, (0,0,0,1) -> kappa2,
// (0,0,1,1) -> kappa12, (0,1,1,0) -> lambda12.
struct ModeCoherenceRequest {
    int r = 0, s = 0, m = 0, n = 0;
    double t = 0.0;
    Schedule schedule{};
    GaussianStateSpec state{};
};

enum class CoherenceFactor { K1, K2, K12, L12 };

ModeCoherenceRequest make_request(CoherenceFactor which, double t,
                                  const Schedule& sched, const GaussianStateSpec& state);

// Mode-summed coherence factor, including the free qubit phases. The
// per-mode exponents are accumulated with deterministic pairwise summation,
// so results are bit-identical across runs and thread counts.
std::complex<double> oracle_coherence(const ModeCoherenceRequest& request,
                                      const ModeGrid& grid, const BathSpec& bath);

// Log-modulus of one factor with an explicitly supplied characteristic
// matrix (used exactly as passed; no angle-sign flip applied). This is the
// low-level hook that convention tests probe; oracle_coherence always passes
// char_conjugate(state.covariance()). pref1/pref2 are the gamma prefactors
// (+-2 or 0).
double oracle_log_modulus(double pref1, double pref2, double t, const Schedule& sched,
                          const ModeGrid& grid, const TwoModeCovariance& S_char);

// All four factors as a complex trace over a time grid, parallel over samples.
CoherenceTrace oracle_trace(const std::vector<double>& times, const Schedule& sched,
                            const BathSpec& bath, const GaussianStateSpec& state,
                            const OracleOptions& opts = {});

// Max absolute deviation of the oracle moduli from the closed forms over the
// supplied times (requires t1_start = 0 so the closed forms apply).
struct DeviationReport {
    double dev_k1 = 0.0, dev_k2 = 0.0, dev_k12 = 0.0, dev_l12 = 0.0;
    double max_dev = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

DeviationReport compare_with_closed_form(const Schedule& sched, const BathSpec& bath,
                                         const GaussianStateSpec& state,
                                         const std::vector<double>& times,
                                         double tolerance,
                                         const OracleOptions& opts = {});

}  // namespace squeezeprobe
