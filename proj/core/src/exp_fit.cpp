#include "hamflow/exp_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamflow {

ExpFit fit_exponential_tail(const std::vector<double>& times,
                            const std::vector<double>& values,
                            double floor, double peak_fraction, int min_points) {
    ExpFit fit;
    double peak = 0.0;
    std::size_t peak_idx = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > peak) {
            peak = values[i];
            peak_idx = i;
        }
    }
    if (peak <= floor) {
        fit.all_zero = true;
        fit.ok = true;
        fit.rate = 1.0;
        fit.amplitude = 0.0;
        return fit;
    }

    std::vector<double> xs, ys;
    bool entered = false;
    for (std::size_t i = peak_idx; i < values.size(); ++i) {
        if (!entered && values[i] <= peak * peak_fraction) entered = true;
        if (!entered) continue;
        if (values[i] <= floor) break;
        xs.push_back(times[i]);
        ys.push_back(std::log(values[i]));
    }
    fit.points = static_cast<int>(xs.size());
    if (fit.points < min_points) return fit;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double m = xs.size();
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return fit;
    const double slope = (m * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / m;

    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (icept + slope * xs[i]);
        ss += r * r;
    }
    const double ymin = *std::min_element(ys.begin(), ys.end());
    const double ymax = *std::max_element(ys.begin(), ys.end());

    fit.rate = -slope;
    fit.amplitude = std::exp(icept);
    fit.log_rms = std::sqrt(ss / m);
    fit.log_rms_rel = (ymax > ymin) ? fit.log_rms / (ymax - ymin) : fit.log_rms;
    fit.window_lo = xs.front();
    fit.window_hi = xs.back();
    fit.ok = fit.rate > 0.0;
    return fit;
}

double exp_tail_integral_0(const ExpFit& f, double T) {
    if (f.all_zero || f.amplitude == 0.0) return 0.0;
    return f.amplitude / f.rate * std::exp(-f.rate * T);
}

double exp_tail_integral_1(const ExpFit& f, double T) {
    if (f.all_zero || f.amplitude == 0.0) return 0.0;
    const double c = f.rate;
    return f.amplitude * std::exp(-c * T) * (T / c + 1.0 / (c * c));
}

double exp_tail_integral_shifted(const ExpFit& f, double T) {
    if (f.all_zero || f.amplitude == 0.0) return 0.0;
    const double c = f.rate;
    return f.amplitude * std::exp(-c * T) * (T / (c * c) + 2.0 / (c * c * c));
}

std::vector<double> richardson_orders(const std::vector<double>& values) {
    std::vector<double> orders;
    for (std::size_t i = 0; i + 2 < values.size(); ++i) {
        const double d1 = std::abs(values[i] - values[i + 1]);
        const double d2 = std::abs(values[i + 1] - values[i + 2]);
        if (d2 == 0.0) {
            orders.push_back(std::numeric_limits<double>::infinity());
        } else {
            orders.push_back(std::log2(d1 / d2));
        }
    }
    return orders;
}

}  // namespace hamflow
