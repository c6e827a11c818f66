#include "hamflow/asphericity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hamflow {

namespace {

/// Cumulative trapezoid of s*max|M|^2(s)/2 on the trace samples.
std::vector<double> cumulative_damping(const FlowTrace& trace) {
    const auto& t = trace.times;
    const auto& m = trace.m_sup_sq;
    std::vector<double> J(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double g0 = 0.5 * t[i - 1] * m[i - 1];
        const double g1 = 0.5 * t[i] * m[i];
        J[i] = J[i - 1] + 0.5 * (g0 + g1) * (t[i] - t[i - 1]);
    }
    return J;
}

double interp_series(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
    if (t <= ts.front()) return vs.front();
    if (t >= ts.back()) return vs.back();
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return vs[i - 1] + w * (vs[i] - vs[i - 1]);
}

}  // namespace

double kernel_E(const FlowTrace& trace, double tau, double t) {
    if (tau > t)
        throw_error(ErrorKind::domain, "kernel_E requires tau <= t");
    if (tau < trace.t_begin() - 1e-12)
        throw_error(ErrorKind::domain, "kernel_E: tau below the trace start");
    const std::vector<double> J = cumulative_damping(trace);
    // Past the trace end |M|^2 is below the truncation threshold, so the
    // cumulative integral is frozen at its final value.
    const double Jt = interp_series(trace.times, J, t);
    const double Jtau = interp_series(trace.times, J, tau);
    return std::exp(-(Jt - Jtau));
}

namespace {

/// Shared quadrature: partial values at every sample time <= t_stop, using
/// one cumulative-damping pass.
std::vector<std::pair<double, double>> partial_on_samples(const FlowTrace& trace,
                                                          std::size_t stop_index) {
    const auto& ts = trace.times;
    const auto& ks = trace.k_star;
    const std::vector<double> J = cumulative_damping(trace);
    std::vector<std::pair<double, double>> out;
    out.reserve(stop_index + 1);
    // m(t_i) = 1/2 * sum of trapezoids of (1 - k_star(tau) e^{J(tau) - J(t_i)}).
    // Accumulate the two pieces separately: int 1 dtau and e^{-J(t_i)} *
    // int k_star(tau) e^{J(tau)} dtau. J stays small (it is bounded by the
    // total damping), so the exponentials are well conditioned.
    double int_one = 0.0, int_ke = 0.0;
    out.emplace_back(ts[0], 0.0);
    for (std::size_t i = 1; i <= stop_index; ++i) {
        const double dt = ts[i] - ts[i - 1];
        int_one += dt;
        int_ke += 0.5 * dt * (ks[i - 1] * std::exp(J[i - 1]) + ks[i] * std::exp(J[i]));
        out.emplace_back(ts[i], 0.5 * (int_one - std::exp(-J[i]) * int_ke));
    }
    return out;
}

}  // namespace

double asphericity_partial(const FlowTrace& trace, double t) {
    const auto& ts = trace.times;
    if (t < ts.front() - 1e-12)
        throw_error(ErrorKind::domain, "asphericity_partial: t below the trace start");
    // Beyond the trace end the integrand is zero to truncation tolerance
    // (k_star = 1, E frozen), so the partial is flat there.
    std::size_t stop = ts.size() - 1;
    const auto pts = partial_on_samples(trace, stop);
    if (t >= ts.back()) return pts.back().second;
    // Interpolate within the sample grid.
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin());
    if (ts[i] == t) return pts[i].second;
    const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return pts[i - 1].second + w * (pts[i].second - pts[i - 1].second);
}

AsphericityResult asphericity_limit(const FlowTrace& trace, double threshold_override) {
    const double threshold =
        threshold_override >= 0.0 ? threshold_override : trace.threshold;

    // Locate the truncation sample: first sample at/below the threshold, or
    // the last sample if the series never got there.
    const auto& ms = trace.m_sup_sq;
    std::size_t trunc = ms.size() - 1;
    bool reached = trace.truncated && threshold_override < 0.0;
    if (!reached) {
        for (std::size_t i = 0; i < ms.size(); ++i) {
            if (ms[i] < threshold) {
                trunc = i;
                reached = true;
                break;
            }
        }
    }

    AsphericityResult res;
    res.partial_series = partial_on_samples(trace, trunc);
    res.truncation_time = trace.times[trunc];
    const double partial_end = res.partial_series.back().second;

    const ExpFit& mf = trace.msq_fit;
    const ExpFit& df = trace.deficit_fit;
    if (!mf.ok || !df.ok)
        throw_error(ErrorKind::cannot_extrapolate,
                    "decay fit failed (non-positive rate); cannot bound the tail");

    const double T = res.truncation_time;
    // Tail pieces past T: the unresolved curvature deficit, the unresolved
    // damping acting on the resolved window, and the deficit of E itself.
    const double delta_K = exp_tail_integral_0(df, T);
    const double delta_M = 0.5 * exp_tail_integral_1(mf, T);
    const double delta_E2 = 0.5 * exp_tail_integral_shifted(mf, T);
    res.tail_bound = 0.5 * (delta_K + delta_E2) + 0.5 * (T - 1.0) * delta_M;
    res.limit = partial_end + 0.5 * res.tail_bound;
    return res;
}

}  // namespace hamflow
