#pragma once

#include <vector>

#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/schedule.hpp"

namespace squeezeprobe {

// Trace-distance (information-backflow) measure over the two Bell pairs, and
// the search for the interaction duration that maximizes it.

// Uniform sampling of [0, t2_end + margin]; the step is the shortest positive
// window length divided by points_per_window.
struct TimeGridSpec {
    int points_per_window = 4000;
    double margin = 1e-3;
};

// Minimum sampling density accepted by blp_measure.
inline constexpr int kMinPointsPerWindow = 100;

std::vector<double> build_time_grid(const Schedule& sched, const TimeGridSpec& grid);

struct IncreaseInterval {
    double t_begin, t_end, gain;
};

struct NonMarkovResult {
    double measure = 0.0;           // total positive variation of the best pair
    BellPair best_pair = BellPair::I;
    std::vector<IncreaseInterval> increase_intervals;  // best pair, ordered
    double measure_pair_I = 0.0;
    double measure_pair_II = 0.0;
};

// Total positive variation of the Bell-pair trace distance, maximized over
// the two pairs. Requires t1_start = 0 and a grid of at least
// kMinPointsPerWindow points per window. Monotone traces give exactly 0.
NonMarkovResult blp_measure(const Schedule& sched, const BathSpec& bath,
                            const TwoModeCovariance& S, const TimeGridSpec& grid = {});

struct SweepPoint {
    double delta_t;
    double measure;
    BellPair best_pair;
};

// One blp_measure per duration with the consecutive schedule
// (0, dt, dt + gap, 2 dt + gap); parallel across grid points, output ordered.
std::vector<SweepPoint> measure_vs_duration(const BathSpec& bath, const TwoModeCovariance& S,
                                            const std::vector<double>& delta_t_grid,
                                            double gap = 0.0,
                                            const TimeGridSpec& grid = {});

// Same sweep with the Bell pair fixed by the caller instead of maximized.
std::vector<SweepPoint> rephasing_vs_duration(const BathSpec& bath, const TwoModeCovariance& S,
                                              const std::vector<double>& delta_t_grid,
                                              BellPair pair, double gap = 0.0,
                                              const TimeGridSpec& grid = {});

// Positive variation of one pair's trace distance for a single duration.
double rephasing_gain(const BathSpec& bath, const TwoModeCovariance& S, double delta_t,
                      BellPair pair, double gap = 0.0, const TimeGridSpec& grid = {});

struct OptimalResult {
    double delta_t_star = 0.0;
    double measure_star = 0.0;
    bool on_edge = false;  // coarse maximum sat on a bracket endpoint
};

// Coarse scan (parallel) over [dt_lo, dt_hi] followed by golden-section
// refinement to relative duration tolerance 1e-3. The scan uses a reduced
// grid density; the returned measure is re-evaluated on the full grid.
OptimalResult optimal_duration(const BathSpec& bath, const TwoModeCovariance& S,
                               double dt_lo, double dt_hi, int coarse_points = 96,
                               const TimeGridSpec& final_grid = {});

}  // namespace squeezeprobe
