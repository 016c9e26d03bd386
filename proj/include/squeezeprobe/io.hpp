#pragma once

#include <string>
#include <vector>

#include "squeezeprobe/coherence.hpp"
#include "squeezeprobe/covariance.hpp"
#include "squeezeprobe/estimator.hpp"
#include "squeezeprobe/nonmarkov.hpp"

namespace squeezeprobe::io {

// Serialization used by the CLI and the regression tests. All floating-point
// fields are printed with "%.12g" so identical inputs give byte-identical
// files regardless of locale or stream state.

std::string format_number(double x);

std::string pair_name(BellPair pair);          // "I" / "II"
BellPair pair_from_string(const std::string&);  // accepts "I" / "II"

// Header: t,abs_k1,abs_k2,abs_k12,abs_l12,re_k12,im_k12,re_l12,im_l12
std::string trace_to_csv(const CoherenceTrace& trace);

// Same schema plus a per-row deviation column (the largest modulus difference
// of the four factors between the two traces at that instant), terminated by
// a summary line "# max_deviation = <value>". Rows follow `probe`'s values.
std::string compare_to_csv(const CoherenceTrace& probe, const CoherenceTrace& reference);

// Header: delta_t,measure,best_pair
std::string sweep_to_csv(const std::vector<SweepPoint>& points);

// {"measure": ..., "best_pair": "...", "intervals": [{"t0","t1","gain"}...]}
std::string nonmarkov_to_json(const NonMarkovResult& result);

// {"delta_t_star": ..., "measure_star": ..., "on_edge": ...}
std::string optimal_to_json(const OptimalResult& result);

// {"a","b","c_plus","c_minus","c12","c21"}; parsing accepts the same object
// with absent correlation entries defaulting to 0 (a, b default to 1/2).
std::string covariance_to_json(const TwoModeCovariance& S);
TwoModeCovariance covariance_from_json(const std::string& text);

// Rows: delta_t,observed,pair. An optional header row is skipped; blank lines
// and lines starting with '#' are ignored.
std::vector<Measurement> measurements_from_csv(const std::string& text);
std::string measurements_to_csv(const std::vector<Measurement>& measurements);

// {"r_hat": ..., "phi_hat": ...|null, "residual": ..., "warnings": [...]}
std::string estimate_to_json(const EstimationResult& result);

}  // namespace squeezeprobe::io
