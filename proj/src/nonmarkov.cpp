#include "squeezeprobe/nonmarkov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "squeezeprobe/numeric.hpp"
#include "squeezeprobe/parallel.hpp"

namespace squeezeprobe {

namespace {

// Positive variation and increase intervals of a sampled trace distance.
// Consecutive increasing steps merge into one interval; gain is the rise over
// the whole run, so the gains sum exactly to the positive variation.
std::pair<double, std::vector<IncreaseInterval>> positive_variation(
    const std::vector<double>& t, const std::vector<double>& D) {
    double total = 0.0;
    std::vector<IncreaseInterval> intervals;
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t i = 1; i < D.size(); ++i) {
        if (D[i] > D[i - 1]) {
            if (!in_run) {
                in_run = true;
                run_start = i - 1;
            }
        } else if (in_run) {
            intervals.push_back({t[run_start], t[i - 1], D[i - 1] - D[run_start]});
            total += D[i - 1] - D[run_start];
            in_run = false;
        }
    }
    if (in_run) {
        intervals.push_back({t[run_start], t.back(), D.back() - D[run_start]});
        total += D.back() - D[run_start];
    }
    return {total, intervals};
}

double shortest_window(const Schedule& sched) {
    const double w1 = sched.t1_end - sched.t1_start;
    const double w2 = sched.t2_end - sched.t2_start;
    double shortest = 0.0;
    for (double w : {w1, w2})
        if (w > 0.0 && (shortest == 0.0 || w < shortest)) shortest = w;
    return shortest;
}

}  // namespace

std::vector<double> build_time_grid(const Schedule& sched, const TimeGridSpec& grid) {
    validate_schedule(sched);
    if (grid.points_per_window < 1)
        throw std::invalid_argument("build_time_grid: points_per_window must be >= 1");
    const double t_max = sched.t2_end + grid.margin;
    const double wmin = shortest_window(sched);
    std::size_t n = static_cast<std::size_t>(grid.points_per_window);
    if (wmin > 0.0) {
        const double h = wmin / grid.points_per_window;
        n = static_cast<std::size_t>(std::llround(t_max / h));
    }
    return linspace(0.0, t_max, n + 1);
}

NonMarkovResult blp_measure(const Schedule& sched, const BathSpec& bath,
                            const TwoModeCovariance& S, const TimeGridSpec& grid) {
    if (sched.t1_start != 0.0)
        throw std::invalid_argument("blp_measure: closed forms require t1_start = 0");
    if (grid.points_per_window < kMinPointsPerWindow)
        throw std::invalid_argument("blp_measure: time grid too coarse");
    if (!validate_physical(S)) throw std::domain_error("blp_measure: unphysical covariance");
    validate_bath(bath);

    const std::vector<double> t = build_time_grid(sched, grid);
    std::vector<double> dI(t.size()), dII(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const CoherencePoint c = coherence_point(t[i], sched, bath, S);
        dI[i] = std::abs(c.k12);
        dII[i] = std::abs(c.l12);
    }
    auto [totalI, intervI] = positive_variation(t, dI);
    auto [totalII, intervII] = positive_variation(t, dII);

    NonMarkovResult res;
    res.measure_pair_I = totalI;
    res.measure_pair_II = totalII;
    if (totalI >= totalII) {
        res.measure = totalI;
        res.best_pair = BellPair::I;
        res.increase_intervals = std::move(intervI);
    } else {
        res.measure = totalII;
        res.best_pair = BellPair::II;
        res.increase_intervals = std::move(intervII);
    }
    return res;
}

std::vector<SweepPoint> measure_vs_duration(const BathSpec& bath, const TwoModeCovariance& S,
                                            const std::vector<double>& delta_t_grid,
                                            double gap, const TimeGridSpec& grid) {
    for (double dt : delta_t_grid)
        if (!(dt > 0.0))
            throw std::invalid_argument("measure_vs_duration: durations must be > 0");
    std::vector<SweepPoint> out(delta_t_grid.size());
    parallel_for(delta_t_grid.size(), [&](std::size_t i) {
        const NonMarkovResult r =
            blp_measure(consecutive_windows(delta_t_grid[i], gap), bath, S, grid);
        out[i] = {delta_t_grid[i], r.measure, r.best_pair};
    });
    return out;
}

std::vector<SweepPoint> rephasing_vs_duration(const BathSpec& bath, const TwoModeCovariance& S,
                                              const std::vector<double>& delta_t_grid,
                                              BellPair pair, double gap,
                                              const TimeGridSpec& grid) {
    for (double dt : delta_t_grid)
        if (!(dt > 0.0))
            throw std::invalid_argument("rephasing_vs_duration: durations must be > 0");
    std::vector<SweepPoint> out(delta_t_grid.size());
    parallel_for(delta_t_grid.size(), [&](std::size_t i) {
        const NonMarkovResult r =
            blp_measure(consecutive_windows(delta_t_grid[i], gap), bath, S, grid);
        out[i] = {delta_t_grid[i],
                  pair == BellPair::I ? r.measure_pair_I : r.measure_pair_II, pair};
    });
    return out;
}

double rephasing_gain(const BathSpec& bath, const TwoModeCovariance& S, double delta_t,
                      BellPair pair, double gap, const TimeGridSpec& grid) {
    const NonMarkovResult r = blp_measure(consecutive_windows(delta_t, gap), bath, S, grid);
    return pair == BellPair::I ? r.measure_pair_I : r.measure_pair_II;
}

OptimalResult optimal_duration(const BathSpec& bath, const TwoModeCovariance& S,
                               double dt_lo, double dt_hi, int coarse_points,
                               const TimeGridSpec& final_grid) {
    if (!(dt_lo > 0.0) || !(dt_hi > dt_lo))
        throw std::invalid_argument("optimal_duration: need 0 < dt_lo < dt_hi");
    if (coarse_points < 3)
        throw std::invalid_argument("optimal_duration: need at least 3 coarse points");

    // Reduced density during the search; full density for the reported value.
    TimeGridSpec search_grid = final_grid;
    search_grid.points_per_window = std::min(final_grid.points_per_window, 2000);

    const std::vector<double> dts = linspace(dt_lo, dt_hi, static_cast<std::size_t>(coarse_points));
    std::vector<double> vals(dts.size());
    parallel_for(dts.size(), [&](std::size_t i) {
        vals[i] = blp_measure(consecutive_windows(dts[i]), bath, S, search_grid).measure;
    });
    const std::size_t imax =
        static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());

    OptimalResult res;
    res.on_edge = (imax == 0 || imax + 1 == dts.size());
    const double blo = dts[imax == 0 ? 0 : imax - 1];
    const double bhi = dts[std::min(dts.size() - 1, imax + 1)];
    auto f = [&](double dt) {
        return blp_measure(consecutive_windows(dt), bath, S, search_grid).measure;
    };
    auto [dt_star, m_search] = golden_max(f, blo, bhi, 1e-3);
    (void)m_search;
    res.delta_t_star = dt_star;
    res.measure_star =
        blp_measure(consecutive_windows(dt_star), bath, S, final_grid).measure;
    return res;
}

}  // namespace squeezeprobe
