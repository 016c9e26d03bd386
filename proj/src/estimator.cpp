#include "squeezeprobe/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/numeric.hpp"

namespace squeezeprobe {

namespace {

TwoModeCovariance covariance_for(StateKind kind, double r, double phi, double n1, double n2) {
    switch (kind) {
        case StateKind::STS:
            return sts_covariance(r, phi, n1, n2);
        case StateKind::EPR:
            return epr_covariance(r);
        case StateKind::MTS:
            return mts_from_r(r);
        case StateKind::Custom:
            break;
    }
    throw std::invalid_argument("estimator: custom covariances have no r parametrization");
}

void check_measurements(const std::vector<Measurement>& measurements) {
    if (measurements.empty()) {
        throw std::invalid_argument("estimator: no measurements");
    }
    for (const Measurement& m : measurements) {
        if (!(m.delta_t > 0.0)) {
            throw std::invalid_argument("estimator: measurement durations must be positive");
        }
        if (!(m.observed >= 0.0)) {
            throw std::invalid_argument("estimator: observed values must be non-negative");
        }
    }
}

std::string format_warning(const char* fmt, double x) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), fmt, x);
    return std::string(buf);
}

// Local minima of a sampled curve, plateau-aware. Interior ones signal rival
// basins; boundary ones are reported separately (a curve sliding into an edge
// is a bracket problem, not multimodality).
std::vector<std::size_t> local_minima(const std::vector<double>& v, bool interior_only) {
    std::vector<std::size_t> idx;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_higher = (i == 0) || v[i - 1] > v[i];
        std::size_t j = i;
        while (j + 1 < n && v[j + 1] == v[i]) ++j;
        const bool right_higher = (j == n - 1) || v[j + 1] > v[i];
        const bool at_edge = (i == 0) || (j == n - 1);
        if (left_higher && right_higher && !(interior_only && at_edge)) idx.push_back(i);
        i = j;
    }
    return idx;
}

}  // namespace

double model_rephasing(StateKind kind, double r, double phi, double n1, double n2,
                       const BathSpec& bath, double delta_t, BellPair pair,
                       const TimeGridSpec& grid) {
    const TwoModeCovariance S = covariance_for(kind, r, phi, n1, n2);
    return rephasing_gain(bath, S, delta_t, pair, 0.0, grid);
}

double rms_misfit(const std::vector<Measurement>& measurements, StateKind kind, double r,
                  double phi, double n1, double n2, const BathSpec& bath,
                  const TimeGridSpec& grid) {
    check_measurements(measurements);
    const TwoModeCovariance S = covariance_for(kind, r, phi, n1, n2);
    double sum_sq = 0.0;
    for (const Measurement& m : measurements) {
        const double model = rephasing_gain(bath, S, m.delta_t, m.pair, 0.0, grid);
        const double d = model - m.observed;
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(measurements.size()));
}

std::vector<std::pair<double, double>> forward_curve(const GaussianStateSpec& state,
                                                     const BathSpec& bath,
                                                     const std::vector<double>& delta_ts,
                                                     std::optional<BellPair> pair) {
    const TwoModeCovariance S = state.covariance();
    std::vector<std::pair<double, double>> out(delta_ts.size());
    const std::vector<SweepPoint> pts = pair.has_value()
                                            ? rephasing_vs_duration(bath, S, delta_ts, *pair)
                                            : measure_vs_duration(bath, S, delta_ts);
    for (std::size_t i = 0; i < delta_ts.size(); ++i) {
        out[i] = {pts[i].delta_t, pts[i].measure};
    }
    return out;
}

EstimationResult estimate_r(const std::vector<Measurement>& measurements, StateKind kind,
                            double n1, double n2, double phi, const BathSpec& bath,
                            std::pair<double, double> bracket, const EstimateOptions& opts) {
    check_measurements(measurements);
    if (!(bracket.second > bracket.first)) {
        throw std::invalid_argument("estimate_r: bracket must satisfy lo < hi");
    }
    if (opts.coarse_points < 3) {
        throw std::invalid_argument("estimate_r: coarse scan needs at least 3 points");
    }

    EstimationResult result;
    result.bracket = bracket;

    const auto misfit = [&](double r) {
        return rms_misfit(measurements, kind, r, phi, n1, n2, bath, opts.grid);
    };

    const std::vector<double> rs =
        linspace(bracket.first, bracket.second, static_cast<std::size_t>(opts.coarse_points));
    std::vector<double> vals(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) vals[i] = misfit(rs[i]);

    if (local_minima(vals, /*interior_only=*/true).size() > 1) {
        result.warnings.push_back(
            "coarse scan is not unimodal; refining the global minimum only");
    }

    const std::size_t imin = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());

    if (imin == 0 || imin + 1 == rs.size()) {
        result.r_hat = rs[imin];
        result.residual = vals[imin];
        result.warnings.push_back(format_warning(
            "misfit minimum sits on the bracket edge r = %.6g; widen the bracket", rs[imin]));
    } else {
        const auto [r_hat, res] = golden_min(misfit, rs[imin - 1], rs[imin + 1], opts.r_tol);
        result.r_hat = r_hat;
        result.residual = res;
    }

    if (result.residual > opts.mismatch_threshold) {
        result.warnings.push_back(format_warning(
            "residual %.3g exceeds the mismatch threshold; model may not describe the data",
            result.residual));
    }
    return result;
}

EstimationResult estimate_r_phi(const std::vector<Measurement>& measurements, double n1,
                                double n2, const BathSpec& bath,
                                std::pair<double, double> r_bracket,
                                std::vector<double> phi_grid, const EstimateOptions& opts) {
    check_measurements(measurements);
    std::set<double> distinct;
    for (const Measurement& m : measurements) distinct.insert(m.delta_t);
    if (distinct.size() < 3) {
        throw std::invalid_argument(
            "estimate_r_phi: need measurements at >= 3 distinct durations");
    }
    if (phi_grid.empty()) {
        phi_grid = linspace(0.0, std::acos(-1.0), 17);
    }
    if (phi_grid.size() < 3) {
        throw std::invalid_argument("estimate_r_phi: angle grid needs >= 3 points");
    }

    // Outer grid: a cheap estimate_r per candidate angle.
    EstimateOptions inner = opts;
    inner.coarse_points = 32;
    inner.r_tol = 1e-3;
    std::vector<double> resid(phi_grid.size());
    std::vector<double> r_at(phi_grid.size());
    for (std::size_t i = 0; i < phi_grid.size(); ++i) {
        const EstimationResult e = estimate_r(measurements, StateKind::STS, n1, n2,
                                              phi_grid[i], bath, r_bracket, inner);
        resid[i] = e.residual;
        r_at[i] = e.r_hat;
    }

    const std::size_t best = static_cast<std::size_t>(
        std::min_element(resid.begin(), resid.end()) - resid.begin());

    EstimationResult result;
    result.bracket = r_bracket;

    // Report rival angle minima (edges included) fitting nearly as well as
    // the winner.
    std::string rivals;
    for (std::size_t i : local_minima(resid, /*interior_only=*/false)) {
        if (i == best) continue;
        if (resid[i] <= 2.0 * resid[best] + 1e-12) {
            if (!rivals.empty()) rivals += ", ";
            rivals += format_warning("phi = %.4g", phi_grid[i]);
        }
    }
    if (!rivals.empty()) {
        result.warnings.push_back("near-degenerate angle candidates: " + rivals);
    }

    // Golden refinement of the angle between the best grid point's neighbours,
    // with a tightened r search bracketing the outer winner.
    EstimateOptions refine = opts;
    refine.coarse_points = 16;
    refine.r_tol = 1e-4;
    const double r_lo = std::max(r_bracket.first, r_at[best] - 0.5);
    const double r_hi = std::min(r_bracket.second, r_at[best] + 0.5);
    const std::pair<double, double> tight{r_lo, r_hi};

    const auto phi_misfit = [&](double phi) {
        return estimate_r(measurements, StateKind::STS, n1, n2, phi, bath, tight, refine)
            .residual;
    };

    const double lo = phi_grid[best == 0 ? 0 : best - 1];
    const double hi = phi_grid[best + 1 >= phi_grid.size() ? phi_grid.size() - 1 : best + 1];
    double phi_hat = phi_grid[best];
    if (hi > lo) {
        phi_hat = golden_min(phi_misfit, lo, hi, 2e-4).first;
    }

    const EstimationResult final_fit =
        estimate_r(measurements, StateKind::STS, n1, n2, phi_hat, bath, tight, refine);
    result.r_hat = final_fit.r_hat;
    result.phi_hat = phi_hat;
    result.residual = final_fit.residual;
    for (const std::string& w : final_fit.warnings) result.warnings.push_back(w);
    return result;
}

PhotonSplitResult distinguish_photon_numbers(const std::vector<Measurement>& measurements,
                                             StateKind kind, double r, double nsum,
                                             const BathSpec& bath, int grid_points,
                                             const EstimateOptions& opts) {
    check_measurements(measurements);
    if (!(nsum >= 0.0)) {
        throw std::invalid_argument("distinguish_photon_numbers: photon sum must be >= 0");
    }
    if (grid_points < 3) {
        throw std::invalid_argument("distinguish_photon_numbers: grid needs >= 3 points");
    }
    if (kind != StateKind::STS && kind != StateKind::MTS) {
        throw std::invalid_argument(
            "distinguish_photon_numbers: only sts and mts carry photon-number splits");
    }

    PhotonSplitResult result;
    const std::vector<double> n1s =
        linspace(0.0, nsum, static_cast<std::size_t>(grid_points));
    result.misfit_curve.resize(n1s.size());
    for (std::size_t i = 0; i < n1s.size(); ++i) {
        const TwoModeCovariance S = (kind == StateKind::STS)
                                        ? sts_covariance(r, 0.0, n1s[i], nsum - n1s[i])
                                        : mts_covariance(n1s[i], nsum - n1s[i]);
        double sum_sq = 0.0;
        for (const Measurement& m : measurements) {
            const double model = rephasing_gain(bath, S, m.delta_t, m.pair, 0.0, opts.grid);
            const double d = model - m.observed;
            sum_sq += d * d;
        }
        result.misfit_curve[i] = {n1s[i], std::sqrt(sum_sq / measurements.size())};
    }

    const auto cmp = [](const auto& a, const auto& b) { return a.second < b.second; };
    const auto [mn, mx] =
        std::minmax_element(result.misfit_curve.begin(), result.misfit_curve.end(), cmp);
    result.n1_hat = mn->first;
    result.n2_hat = nsum - mn->first;
    result.min_misfit = mn->second;
    result.flatness = mx->second - mn->second;

    if (result.min_misfit > 1e-3) {
        result.warnings.push_back(format_warning(
            "residual floor %.3g exceeds 1e-3; measurement precision is insufficient "
            "to resolve the photon split",
            result.min_misfit));
    }
    if (result.flatness < 1e-3) {
        result.warnings.push_back(format_warning(
            "misfit varies by only %.3g across the grid; the data barely constrain the split",
            result.flatness));
    }
    return result;
}

}  // namespace squeezeprobe
