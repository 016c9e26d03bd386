#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace squeezeprobe {

// Deterministic pairwise (cascade) summation. Reduction order depends only on
// the element count, never on thread layout, so repeated runs are bit-identical.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out[n - 1] = hi;
    return out;
}

// Golden-section maximization of a unimodal f over [lo, hi].
// Terminates when the bracket shrinks below reltol relative to its location;
// returns (midpoint, f(midpoint)).
inline std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                            double lo, double hi, double reltol = 1e-3) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while ((b - a) > reltol * std::max({std::fabs(a), std::fabs(b), 1e-12})) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

// Golden-section minimization with an absolute bracket-width tolerance.
inline std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                            double lo, double hi, double abstol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while ((b - a) > abstol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace squeezeprobe
