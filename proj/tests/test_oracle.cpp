#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/mode_oracle.hpp"
#include "squeezeprobe/numeric.hpp"

using namespace squeezeprobe;

namespace {

const Schedule kConsec = consecutive_windows(0.025);
const BathSpec kBath{};
constexpr double kPi = 3.14159265358979323846;

GaussianStateSpec make_spec(StateKind kind, double r, double phi = 0.0) {
    GaussianStateSpec spec;
    spec.kind = kind;
    spec.r = r;
    spec.phi = phi;
    return spec;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("midpoint grid integrates the ohmic density") {
    const ModeGrid grid = build_grid(kBath, 20000, 40.0);
    REQUIRE(grid.omegas.size() == 20000);
    const double dw = 40.0 / 20000;
    CHECK(grid.omegas.front() == doctest::Approx(0.5 * dw).epsilon(1e-14));
    CHECK(grid.omegas.back() == doctest::Approx(40.0 - 0.5 * dw).epsilon(1e-12));

    // sum g^2 = integral of alpha w e^-w = alpha, up to the midpoint-rule error.
    const double total1 = std::accumulate(grid.g1_sq.begin(), grid.g1_sq.end(), 0.0);
    CHECK(total1 == doctest::Approx(1.0).epsilon(1e-4));

    BathSpec uneven = kBath;
    uneven.alpha2 = 2.0;
    const ModeGrid grid2 = build_grid(uneven, 20000, 40.0);
    const double total2 = std::accumulate(grid2.g2_sq.begin(), grid2.g2_sq.end(), 0.0);
    CHECK(total2 == doctest::Approx(2.0).epsilon(1e-4));

    CHECK_THROWS_AS(build_grid(kBath, 1, 40.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(kBath, 100, 0.0), std::invalid_argument);
}

TEST_CASE("per-mode displacement amplitude") {
    const ModeGrid grid = build_grid(kBath, 8, 4.0);
    const std::size_t k = 3;
    const double w = grid.omegas[k];
    const double g = std::sqrt(grid.g1_sq[k]);

    // Before the window opens the mode is undisplaced.
    CHECK(std::abs(beta_coefficient(grid, 2, k, 0.01, kConsec)) == 0.0);

    // Inside the first window the closed expression applies directly.
    const double t = 0.017;
    const std::complex<double> expected =
        g / w * std::exp(std::complex<double>(0.0, w * kConsec.t1_start)) *
        (1.0 - std::exp(std::complex<double>(0.0, w * t)));
    CHECK(std::abs(beta_coefficient(grid, 1, k, t, kConsec) - expected) < 1e-15);

    // A shifted window changes the phase, not the magnitude.
    const Schedule shifted{0.5, 0.517, 0.517, 0.54};
    const std::complex<double> b = beta_coefficient(grid, 1, k, 0.517, shifted);
    CHECK(std::abs(b) == doctest::Approx(std::abs(expected)).epsilon(1e-12));
    CHECK(std::arg(b) != doctest::Approx(std::arg(expected)).epsilon(1e-6));
}

TEST_CASE("factor index mapping") {
    const GaussianStateSpec spec = make_spec(StateKind::EPR, 1.0);
    const ModeCoherenceRequest k1 = make_request(CoherenceFactor::K1, 0.01, kConsec, spec);
    CHECK((k1.r == 0 && k1.s == 0 && k1.m == 1 && k1.n == 0));
    const ModeCoherenceRequest k2 = make_request(CoherenceFactor::K2, 0.01, kConsec, spec);
    CHECK((k2.r == 0 && k2.s == 0 && k2.m == 0 && k2.n == 1));
    const ModeCoherenceRequest k12 = make_request(CoherenceFactor::K12, 0.01, kConsec, spec);
    CHECK((k12.r == 0 && k12.s == 0 && k12.m == 1 && k12.n == 1));
    const ModeCoherenceRequest l12 = make_request(CoherenceFactor::L12, 0.01, kConsec, spec);
    CHECK((l12.r == 0 && l12.s == 1 && l12.m == 1 && l12.n == 0));

    ModeCoherenceRequest bad = k1;
    bad.m = 2;
    const ModeGrid grid = build_grid(kBath, 16, 4.0);
    CHECK_THROWS_AS(oracle_coherence(bad, grid, kBath), std::invalid_argument);
}

TEST_CASE("mode sum reproduces the closed forms") {
    const std::vector<double> times = linspace(0.0, 0.0501, 41);
    const OracleOptions opts{20000, 40.0};

    const DeviationReport vac = compare_with_closed_form(
        kConsec, kBath, make_spec(StateKind::Custom, 0.0), times, 1e-6, opts);
    CHECK(vac.pass);
    CHECK(vac.max_dev < 1e-6);

    const DeviationReport epr = compare_with_closed_form(
        kConsec, kBath, make_spec(StateKind::EPR, 3.0), times, 1e-4, opts);
    CHECK(epr.pass);

    // Rotated squeezing exercises the angle factor g.
    const DeviationReport sts = compare_with_closed_form(
        kConsec, kBath, make_spec(StateKind::STS, 1.0, kPi / 4.0), times, 1e-4, opts);
    CHECK(sts.pass);
    CHECK(sts.max_dev < 1e-4);
}

TEST_CASE("characteristic matrix needs the angle-sign flip") {
    const TwoModeCovariance S = sts_covariance(1.0, kPi / 2.0, 0.0, 0.0);
    const double closed =
        std::abs(nonlocal_coherences(0.05, kConsec, kBath, S).first);
    const ModeGrid grid = build_grid(kBath, 20000, 40.0);

    // Flipped q-p correlations (the convention the oracle adopts) agree with
    // the closed form; the raw matrix misses by orders of magnitude more.
    const double with_flip =
        std::exp(oracle_log_modulus(2.0, 2.0, 0.05, kConsec, grid, char_conjugate(S)));
    const double without_flip =
        std::exp(oracle_log_modulus(2.0, 2.0, 0.05, kConsec, grid, S));
    CHECK(std::abs(with_flip - closed) < 1e-6);
    CHECK(std::abs(without_flip - closed) > 1e-4);
}

TEST_CASE("shifted first window keeps local moduli") {
    const Schedule shifted{0.5, 0.525, 0.525, 0.55};
    const GaussianStateSpec spec = make_spec(StateKind::EPR, 1.0);
    const ModeGrid grid = build_grid(kBath, 20000, 40.0);
    const std::complex<double> k1 =
        oracle_coherence(make_request(CoherenceFactor::K1, 0.55, shifted, spec), grid, kBath);
    const double a1 = std::cosh(2.0) / 2.0;
    CHECK(std::abs(k1) ==
          doctest::Approx(std::exp(-4.0 * a1 * std::log1p(6.25e-4))).epsilon(1e-5));
}

TEST_CASE("oracle trace is deterministic") {
    const std::vector<double> times = linspace(0.0, 0.05, 11);
    const GaussianStateSpec spec = make_spec(StateKind::MTS, 2.0);
    const OracleOptions opts{4000, 40.0};
    const CoherenceTrace t1 = oracle_trace(times, kConsec, kBath, spec, opts);
    const CoherenceTrace t2 = oracle_trace(times, kConsec, kBath, spec, opts);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(t1.kappa12[i] == t2.kappa12[i]);
        CHECK(t1.lambda12[i] == t2.lambda12[i]);
    }
}

TEST_CASE("input validation") {
    const GaussianStateSpec spec = make_spec(StateKind::EPR, 1.0);
    CHECK_THROWS_AS(compare_with_closed_form(Schedule{0.1, 0.2, 0.2, 0.3}, kBath, spec,
                                             linspace(0.0, 0.3, 5), 1e-4,
                                             OracleOptions{500, 40.0}),
                    std::invalid_argument);

    GaussianStateSpec bad;
    bad.kind = StateKind::Custom;
    bad.custom.c_plus = 0.5;
    bad.custom.c_minus = -0.5;
    const ModeGrid grid = build_grid(kBath, 16, 4.0);
    CHECK_THROWS_AS(
        oracle_coherence(make_request(CoherenceFactor::K12, 0.01, kConsec, bad), grid, kBath),
        std::domain_error);
}

}  // TEST_SUITE
