#pragma once

#include <utility>
#include <vector>

#include "hamflow/ricci_flow.hpp"

namespace hamflow {

/// Asphericity mass of the initial surface, extracted from a flow trace.
struct AsphericityResult {
    std::vector<std::pair<double, double>> partial_series;  // (t, value), nondecreasing
    double limit = 0.0;          // partial at truncation + tail_bound/2
    double tail_bound = 0.0;     // certified bracket width from the decay envelopes
    double truncation_time = 1.0;
};

/// Damping kernel E(tau, t) = exp(-int_tau^t s*max|M|^2(s)/2 ds), evaluated
/// by trapezoidal quadrature on the trace samples (with linear interpolation
/// of the cumulative integral off-sample). E(t,t) = 1; throws on tau > t.
double kernel_E(const FlowTrace& trace, double tau, double t);

/// Partial asphericity mass
///   1/2 * int_1^t (1 - k_star(tau) E(tau, t)) dtau
/// with k_star the normalized minimum curvature from the trace.
double asphericity_partial(const FlowTrace& trace, double t);

/// Limit with a certified tail bound integrated from the fitted exponential
/// envelopes of 1 - k_star and max|M|^2 beyond the truncation time. Throws
/// cannot_extrapolate when the envelopes did not decay.
/// threshold_override < 0 means "use the trace's own threshold"; a
/// non-negative value re-locates the truncation point on the same samples.
AsphericityResult asphericity_limit(const FlowTrace& trace,
                                    double threshold_override = -1.0);

}  // namespace hamflow
