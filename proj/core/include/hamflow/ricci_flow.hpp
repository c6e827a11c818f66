#pragma once

#include <utility>
#include <vector>

#include "hamflow/axisym_metric.hpp"
#include "hamflow/exp_fit.hpp"
#include "hamflow/scalar_field.hpp"
#include "hamflow/sphere_ops.hpp"

namespace hamflow {

/// Snapshot of the evolving surface at one flow time.
///
/// k_mean is the area-weighted mean Gauss curvature (half the mean scalar
/// curvature). On the discrete grid the mean of K is 1 only up to O(dtheta^2)
/// even at area 4*pi, so every formula that analytically pairs K with the
/// constant 1 instead pairs K with k_mean here; the normalized statistics
/// k_star_hat = min(K)/k_mean and the field K/k_mean keep the round sphere an
/// exact fixed point of the discrete system at any resolution.
struct FlowState {
    double t = 1.0;
    AxisymMetric metric;
    ScalarField K;  // raw Gauss curvature
    ScalarField f;  // mean-zero Ricci potential, lap(f) = 2(K - k_mean)
    std::vector<double> m_thth, m_phph;  // evolution tensor components
    std::vector<double> msq;             // |M|^2 = (M_thth/a)^2 + (M_phph/b)^2
    double k_mean = 1.0;
    double k_star = 1.0;      // min_j K_j (raw)
    double k_star_hat = 1.0;  // min(K)/k_mean, <= 1 exactly
    double m_sup_sq = 0.0;    // max_j |M|^2
    double area_error = 0.0;  // relative area drift absorbed by the last renormalization
};

/// Computes curvature, potential, evolution tensor and the derived extrema
/// for an area-normalized metric.
FlowState make_flow_state(double t, AxisymMetric metric, double area_error = 0.0);

/// Mean-zero Ricci potential: solves lap(f) = 2K - r with r the discrete mean
/// scalar curvature. Throws inconsistent_source when the metric area has
/// drifted from 4*pi (the normalization every caller maintains).
ScalarField solve_ricci_potential(const AxisymMetric& m, const ScalarField& K);

/// M = (r/2 - K) g + Hess(f). The phi-phi component is the exact trace
/// remainder b*(lap f - Hess_thth/a), so g^{ij} M_ij vanishes identically.
std::pair<std::vector<double>, std::vector<double>> m_tensor(const AxisymMetric& m,
                                                             const ScalarField& K,
                                                             const ScalarField& f);

/// One explicit 4-stage (classical RK4) step of dg/dt = 2M followed by area
/// renormalization. Throws step_positivity if any stage loses positivity of
/// a or b; callers halve dt and retry.
FlowState flow_step(const FlowState& s, double dt);

struct FlowConfig {
    double t_end = 40.0;
    double sample_dt = 0.005;           // cadence of the scalar series
    int field_stride = 5;               // field snapshots every stride-th sample
    double truncation_threshold = 1e-14;  // stop once max|M|^2 falls below
    double cfl = 0.2;                   // dt = cfl * dtheta^2 * min(a)
    int max_halvings = 20;
};

/// Per-sample field snapshot kept for the extension solver.
struct FieldSample {
    double t;
    std::vector<double> a, b;
    std::vector<double> k_hat;  // K / k_mean
    std::vector<double> msq;
};

struct FlowTrace {
    std::vector<double> times;
    std::vector<double> k_star;    // normalized min curvature, <= 1
    std::vector<double> m_sup_sq;
    std::vector<double> k_mean;
    std::vector<double> area_err;
    std::vector<FieldSample> fields;
    FlowState final_state;
    bool truncated = false;
    double truncation_time = 0.0;
    double threshold = 0.0;
    ExpFit msq_fit;      // max|M|^2 ~ C exp(-c t)
    ExpFit deficit_fit;  // 1 - k_star ~ C exp(-c t)

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
};

/// Runs the flow from t=1, sampling the trace and fitting the exponential
/// decay envelopes. Terminates early at the truncation threshold; throws
/// flow_divergence if max|M|^2 keeps growing over a full decade of flow time
/// or the step-size control collapses.
FlowTrace run_flow(const AxisymMetric& m0, const FlowConfig& cfg = {});

/// Fields of g_t linearly interpolated in t between trace snapshots. Past the
/// last snapshot the surface is round to tolerance: the metric freezes and
/// k_hat = 1, |M|^2 = 0 are used.
struct InterpFields {
    std::vector<double> a, b, k_hat, msq;
};
void interp_fields(const FlowTrace& trace, double t, InterpFields& out);

}  // namespace hamflow
