#pragma once

#include <vector>

namespace hamflow {

/// Least-squares fit of v(t) ~= amplitude * exp(-rate * t) over the decaying
/// tail of a sampled series, done in log space.
struct ExpFit {
    bool ok = false;        // enough points and a positive decay rate
    bool all_zero = false;  // series never rose above the floor; envelope is 0
    double rate = 0.0;
    double amplitude = 0.0;
    double log_rms = 0.0;        // rms of log-residuals over the window
    double log_rms_rel = 0.0;    // log_rms / log-range covered by the window
    int points = 0;
    double window_lo = 0.0, window_hi = 0.0;
};

/// Fits the tail of (times, values). Points enter the window once the series
/// has dropped below peak_fraction of its maximum (skipping the initial
/// transient) and while they stay above `floor` (excluding the numerical
/// noise floor). Fewer than min_points usable samples -> ok=false.
ExpFit fit_exponential_tail(const std::vector<double>& times,
                            const std::vector<double>& values,
                            double floor,
                            double peak_fraction = 0.5,
                            int min_points = 8);

/// Integral of amplitude * exp(-rate s) over [T, inf).
double exp_tail_integral_0(const ExpFit& f, double T);
/// Integral of s * amplitude * exp(-rate s) over [T, inf).
double exp_tail_integral_1(const ExpFit& f, double T);
/// Integral of (s - T) * s * amplitude * exp(-rate s) over [T, inf).
double exp_tail_integral_shifted(const ExpFit& f, double T);

/// Richardson-style convergence orders from values at successively doubled
/// resolutions: order_i = log2(|v_i - v_{i+1}| / |v_{i+1} - v_{i+2}|).
std::vector<double> richardson_orders(const std::vector<double>& values);

}  // namespace hamflow
