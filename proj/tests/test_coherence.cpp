#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/numeric.hpp"
#include "squeezeprobe/schedule.hpp"

using namespace squeezeprobe;

namespace {

const Schedule kConsec = consecutive_windows(0.025);
const BathSpec kBath{};

double ln_f_ratio1(double x) { return 2.0 * std::log1p(x) - std::log1p(4.0 * x); }
double ln_f_ratio2(double x) {
    return std::log1p(9.0 * x) - std::log1p(4.0 * x) - std::log1p(x);
}

}  // namespace

TEST_SUITE("coherence") {

TEST_CASE("schedule plumbing") {
    CHECK(kConsec.t1_start == 0.0);
    CHECK(kConsec.t1_end == 0.025);
    CHECK(kConsec.t2_start == 0.025);
    CHECK(kConsec.t2_end == 0.05);
    const Schedule gapped = consecutive_windows(0.025, 0.01);
    CHECK(gapped.t2_start == doctest::Approx(0.035).epsilon(1e-15));
    CHECK(gapped.t2_end == doctest::Approx(0.06).epsilon(1e-15));

    CHECK(interaction_time(kConsec, 1, 0.01) == 0.01);
    CHECK(interaction_time(kConsec, 2, 0.01) == 0.0);
    CHECK(interaction_time(kConsec, 2, 0.04) == doctest::Approx(0.015).epsilon(1e-15));
    CHECK(interaction_time(kConsec, 1, 1.0) == 0.025);  // saturates
    CHECK_THROWS_AS(interaction_time(kConsec, 3, 0.01), std::invalid_argument);

    CHECK_THROWS_AS(validate_schedule(Schedule{0.1, 0.05, 0.2, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(validate_schedule(Schedule{0.2, 0.3, 0.1, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(validate_schedule(Schedule{-0.1, 0.3, 0.1, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(consecutive_windows(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(validate_bath(BathSpec{0.0, 1.0, 1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("local coherence factor") {
    CHECK(kappa_local(1, 0.0, kConsec, kBath, epr_covariance(2.0)) ==
          std::complex<double>(1.0, 0.0));

    // Vacuum, unit window, unit coupling: (1 + 1)^(-2).
    const Schedule unit{0.0, 2.0, 2.0, 2.0};
    CHECK(std::abs(kappa_local(1, 1.0, unit, kBath, TwoModeCovariance{})) ==
          doctest::Approx(0.25).epsilon(1e-14));

    // Deep squeezing: modulus follows the closed exponent.
    const double a5 = std::cosh(10.0) / 2.0;
    const double expected = std::exp(-4.0 * a5 * std::log1p(0.025 * 0.025));
    CHECK(std::abs(kappa_local(1, 0.025, kConsec, kBath, epr_covariance(5.0))) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.05e-6).epsilon(0.01));

    // Level splittings rotate the phase and leave the modulus alone.
    BathSpec split = kBath;
    split.eps1 = 0.3;
    const std::complex<double> k = kappa_local(1, 0.02, kConsec, split, epr_covariance(1.0));
    CHECK(std::abs(k) ==
          doctest::Approx(std::abs(kappa_local(1, 0.02, kConsec, kBath, epr_covariance(1.0))))
              .epsilon(1e-14));
    CHECK(std::arg(k) == doctest::Approx(-2.0 * 0.3 * 0.02).epsilon(1e-12));

    // Shifted first windows belong to the mode oracle.
    CHECK_THROWS_AS(kappa_local(1, 0.01, Schedule{0.1, 0.2, 0.2, 0.3}, kBath,
                                epr_covariance(1.0)),
                    std::invalid_argument);
    TwoModeCovariance bad;
    bad.c_plus = 0.5;
    bad.c_minus = -0.5;
    CHECK_THROWS_AS(kappa_local(1, 0.01, kConsec, kBath, bad), std::domain_error);
}

TEST_CASE("nonlocal factor f") {
    CHECK(f_factor(0.37, kConsec, kBath, TwoModeCovariance{}) == doctest::Approx(1.0));

    // Both log-ratios at the end of the second window, x = (omega_c dt)^2.
    const double x = 6.25e-4;
    const double c5 = std::sinh(10.0) / 2.0;
    const double lnf_epr = -4.0 * c5 * (ln_f_ratio1(x) + ln_f_ratio2(x));
    CHECK(std::log(f_factor(0.05, kConsec, kBath, epr_covariance(5.0))) ==
          doctest::Approx(lnf_epr).epsilon(1e-12));
    CHECK(lnf_epr == doctest::Approx(-27.322).epsilon(2e-4));

    // Equal correlations kill the second ratio.
    const double cp = (std::cosh(10.0) - 1.0) / 2.0;
    const double lnf_mts = 4.0 * cp * ln_f_ratio1(x);
    CHECK(std::log(f_factor(0.05, kConsec, kBath, mts_from_r(5.0))) ==
          doctest::Approx(lnf_mts).epsilon(1e-12));
    CHECK(lnf_mts == doctest::Approx(-27.469).epsilon(2e-4));
}

TEST_CASE("nonlocal factor g") {
    // Zero squeezing angle: no q-p cross covariance, no correction.
    CHECK(g_factor(0.05, kConsec, kBath, epr_covariance(3.0)) == 1.0);
    CHECK(g_factor(0.0, kConsec, kBath, sts_covariance(1.0, 0.9, 0.0, 0.0)) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // Frozen regression values for a rotated squeezed state, cross-checked
    // against the mode sum during development.
    const TwoModeCovariance S = sts_covariance(1.0, std::acos(-1.0) / 2.0, 0.0, 0.0);
    CHECK(g_factor(0.03, kConsec, kBath, S) ==
          doctest::Approx(0.999855445921).epsilon(1e-9));
    CHECK(g_factor(0.04, kConsec, kBath, S) ==
          doctest::Approx(0.999512675519).epsilon(1e-9));
    CHECK(g_factor(0.05, kConsec, kBath, S) ==
          doctest::Approx(0.999098767200).epsilon(1e-9));
}

TEST_CASE("nonlocal coherences and the rephasing plateau") {
    const auto [k0, l0] = nonlocal_coherences(0.0, kConsec, kBath, epr_covariance(5.0));
    CHECK(std::abs(k0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(l0) == doctest::Approx(1.0).epsilon(1e-14));

    // Plateau value after both windows: the pair-II factor rephases to ~0.814.
    const auto [k, l] = nonlocal_coherences(0.05, kConsec, kBath, epr_covariance(5.0));
    CHECK(std::abs(l) == doctest::Approx(0.814298903717).epsilon(1e-10));
    CHECK(std::abs(k) < 1e-20);  // pair I decays with both windows

    // Negative squeezing swaps the two nonlocal factors.
    const auto [km, lm] = nonlocal_coherences(0.05, kConsec, kBath, epr_covariance(-5.0));
    CHECK(std::abs(km) == doctest::Approx(std::abs(l)).epsilon(1e-12));
    CHECK(std::abs(lm) == doctest::Approx(std::abs(k)).epsilon(1e-9));
}

TEST_CASE("product rule and bounds across states") {
    const std::vector<TwoModeCovariance> states = {
        epr_covariance(3.0), mts_from_r(2.0), sts_covariance(1.5, 0.9, 0.7, 0.3),
        TwoModeCovariance{}};
    const std::vector<double> times = linspace(0.0, 0.075, 31);
    for (const TwoModeCovariance& S : states) {
        double prev1 = 2.0, prev2 = 2.0;
        for (double t : times) {
            const CoherencePoint c = coherence_point(t, kConsec, kBath, S);
            const double lhs = std::abs(c.k12) * std::abs(c.l12);
            const double rhs = std::norm(c.k1) * std::norm(c.k2);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            CHECK(std::abs(c.k1) <= 1.0 + 1e-12);
            CHECK(std::abs(c.k2) <= 1.0 + 1e-12);
            CHECK(std::abs(c.k1) <= prev1 + 1e-12);
            CHECK(std::abs(c.k2) <= prev2 + 1e-12);
            prev1 = std::abs(c.k1);
            prev2 = std::abs(c.k2);
        }
    }

    // Simultaneous equal windows at r = 0: f = g = 1 so kappa12 = kappa1 kappa2.
    const Schedule simul{0.0, 0.4, 0.0, 0.4};
    const CoherencePoint c = coherence_point(0.3, simul, kBath, TwoModeCovariance{});
    CHECK(std::abs(c.k12 - c.k1 * c.k2) < 1e-15);
}

TEST_CASE("bell distances reproduce the strong-rephasing numbers") {
    const TwoModeCovariance S = epr_covariance(4.0);
    const double a4 = std::cosh(8.0) / 2.0;
    const double d1 = bell_distance(0.025, BellPair::II, kConsec, kBath, S);
    CHECK(d1 == doctest::Approx(std::exp(-4.0 * a4 * std::log1p(6.25e-4))).epsilon(1e-12));
    CHECK(d1 == doctest::Approx(0.155).epsilon(0.005));
    const double d2 = bell_distance(0.05, BellPair::II, kConsec, kBath, S);
    CHECK(d2 == doctest::Approx(0.973).epsilon(0.001));
    CHECK(bell_distance(0.0, BellPair::I, kConsec, kBath, S) == doctest::Approx(1.0));
}

TEST_CASE("reduced density matrix") {
    QubitAmplitudes bell_ii{0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    QubitAmplitudes bell_i{1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
    const TwoModeCovariance S = epr_covariance(3.0);

    // t = 0: every initial pure state stays a projector.
    const Eigen::Matrix4cd rho0 = reduced_density_matrix(0.0, bell_ii, kConsec, kBath, S);
    CHECK((rho0 * rho0 - rho0).norm() == doctest::Approx(0.0).epsilon(1e-12));

    const auto [k12, l12] = nonlocal_coherences(0.04, kConsec, kBath, S);
    const Eigen::Matrix4cd rho = reduced_density_matrix(0.04, bell_ii, kConsec, kBath, S);
    CHECK(std::abs(rho(1, 2) - 0.5 * l12) < 1e-14);
    CHECK(std::abs(rho(1, 1) - 0.5) < 1e-14);
    CHECK(std::abs(rho(2, 2) - 0.5) < 1e-14);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-14);

    const Eigen::Matrix4cd rho_i = reduced_density_matrix(0.04, bell_i, kConsec, kBath, S);
    CHECK(std::abs(rho_i(0, 3) - 0.5 * k12) < 1e-14);

    // Hermiticity and positivity over amplitudes, times, and states.
    const QubitAmplitudes generic{std::complex<double>(0.5, 0.1),
                                  std::complex<double>(-0.3, 0.4),
                                  std::complex<double>(0.2, -0.5),
                                  std::complex<double>(std::sqrt(1.0 - 0.8), 0.0)};
    for (const TwoModeCovariance& cov :
         {epr_covariance(5.0), mts_from_r(2.0), sts_covariance(2.0, 0.8, 1.0, 2.0)}) {
        for (double t : {0.0, 0.02, 0.05, 0.075}) {
            const Eigen::Matrix4cd m =
                reduced_density_matrix(t, generic, kConsec, kBath, cov);
            CHECK((m - m.adjoint()).norm() < 1e-13);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
        }
    }

    QubitAmplitudes unnormalized{0.9, 0.0, 0.0, 0.9};
    CHECK_THROWS_AS(reduced_density_matrix(0.01, unnormalized, kConsec, kBath, S),
                    std::invalid_argument);
}

TEST_CASE("trace generation is deterministic and matches pointwise eval") {
    const std::vector<double> times = linspace(0.0, 0.06, 41);
    const TwoModeCovariance S = sts_covariance(1.0, 0.7, 0.5, 0.2);
    const CoherenceTrace tr = coherence_trace(times, kConsec, kBath, S);
    REQUIRE(tr.times.size() == times.size());
    for (std::size_t i = 0; i < times.size(); i += 8) {
        const CoherencePoint c = coherence_point(times[i], kConsec, kBath, S);
        CHECK(tr.kappa12[i] == c.k12);
        CHECK(tr.lambda12[i] == c.l12);
    }
}

}  // TEST_SUITE
