#pragma once

#include <complex>

namespace squeezeprobe {

// Ohmic bath parameters J_j(w) = alpha_j * w * exp(-w / omega_c), shared
// cutoff, plus the qubit half energy gaps entering the free phases.
struct BathSpec {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double omega_c = 1.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
};

// Switching times of the two local interaction windows. Convention:
// t1_start <= t2_start (window 1 opens first), each window well ordered.
struct Schedule {
    double t1_start = 0.0;
    double t1_end = 0.0;
    double t2_start = 0.0;
    double t2_end = 0.0;
};

// Both windows of length dt, second starting `gap` after the first closes:
// (0, dt, dt + gap, 2 dt + gap).
Schedule consecutive_windows(double dt, double gap = 0.0);

// Throws std::invalid_argument on ordering violations or negative times.
void validate_schedule(const Schedule& sched);
void validate_bath(const BathSpec& bath);

// Accumulated interaction time t_j(t) = clamp(t - t_j_start, 0, window
// length): piecewise linear, nondecreasing, saturating when the window closes.
double interaction_time(const Schedule& sched, int j, double t);

// Initial two-qubit amplitudes |psi> = a00|00> + a01|01> + a10|10> + a11|11>.
struct QubitAmplitudes {
    std::complex<double> a00{0.0, 0.0};
    std::complex<double> a01{0.0, 0.0};
    std::complex<double> a10{0.0, 0.0};
    std::complex<double> a11{0.0, 0.0};

    double norm_sq() const;
};

}  // namespace squeezeprobe
