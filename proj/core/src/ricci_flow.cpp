#include "hamflow/ricci_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hamflow {

namespace {
constexpr double four_pi = 4.0 * std::numbers::pi;
}

ScalarField solve_ricci_potential(const AxisymMetric& m, const ScalarField& K) {
    const MetricFaces fc = build_faces(m);
    const double rel_area_drift = std::abs(fc.area - four_pi) / four_pi;
    if (rel_area_drift > 1e-8)
        throw_error(ErrorKind::inconsistent_source,
                    "metric area drifted from 4*pi (relative " +
                        std::to_string(rel_area_drift) + "); renormalize first");
    const double km = weighted_mean(fc, K.values);
    if (std::abs(km - 1.0) > 0.25)
        throw_error(ErrorKind::inconsistent_source,
                    "mean curvature far from the unit-area value, source inconsistent");
    std::vector<double> rhs(fc.n);
    for (int j = 0; j < fc.n; ++j) rhs[j] = 2.0 * (K.values[j] - km);
    ScalarField f;
    f.grid = m.grid;
    f.parity = Parity::even;
    f.values = solve_poisson_meanzero(fc, std::move(rhs));
    return f;
}

std::pair<std::vector<double>, std::vector<double>> m_tensor(const AxisymMetric& m,
                                                             const ScalarField& K,
                                                             const ScalarField& f) {
    const MetricFaces fc = build_faces(m);
    const double km = weighted_mean(fc, K.values);
    const int n = fc.n;
    std::vector<double> hess(n);
    hessian_thth(fc, f.values, hess);
    std::vector<double> m_thth(n), m_phph(n);
    for (int j = 0; j < n; ++j) {
        const double kr = km - K.values[j];
        // lap(f) is substituted by the right-hand side it solves, 2(K - km),
        // so the trace g^{ij} M_ij cancels identically instead of carrying
        // the linear-solve residual.
        m_thth[j] = kr * m.a[j] + hess[j];
        m_phph[j] = kr * m.b[j] + m.b[j] * (-2.0 * kr - hess[j] / m.a[j]);
    }
    return {std::move(m_thth), std::move(m_phph)};
}

namespace {

/// Core of one state evaluation, reusing workspace buffers.
struct FlowEngine {
    int n;
    GridPtr grid;
    MetricFaces fc;
    PoissonWorkspace pw;
    std::vector<double> K, f, hess, rhs;

    explicit FlowEngine(const GridPtr& g) : n(g->n), grid(g) {}

    // Computes K, f, M for the metric (a, b); returns false if the metric is
    // not positive/finite. da/db receive 2*M (the flow velocity).
    bool derivative(const std::vector<double>& a, const std::vector<double>& b,
                    std::vector<double>& da, std::vector<double>& db) {
        for (int j = 0; j < n; ++j)
            if (!(a[j] > 0.0) || !(b[j] > 0.0) || !std::isfinite(a[j]) || !std::isfinite(b[j]))
                return false;
        build_faces(a, b, grid->dtheta, fc);
        gauss_curvature(fc, K);
        const double km = weighted_mean(fc, K);
        rhs.resize(n);
        for (int j = 0; j < n; ++j) rhs[j] = 2.0 * (K[j] - km);
        solve_poisson_meanzero(fc, rhs, f, pw);
        hessian_thth(fc, f, hess);
        da.resize(n);
        db.resize(n);
        for (int j = 0; j < n; ++j) {
            const double kr = km - K[j];
            da[j] = 2.0 * (kr * a[j] + hess[j]);
            db[j] = 2.0 * (kr * b[j] + b[j] * (-2.0 * kr - hess[j] / a[j]));
        }
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(da[j]) || !std::isfinite(db[j])) return false;
        return true;
    }
};

/// RK4 update of (a, b) with stage buffers owned by the caller; returns false
/// on positivity/finiteness loss in any stage or the result.
struct RkWorkspace {
    std::vector<double> k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b, ta, tb;
};

bool rk4_step(FlowEngine& eng, RkWorkspace& ws, std::vector<double>& a,
              std::vector<double>& b, double dt) {
    const int n = eng.n;
    ws.ta.resize(n);
    ws.tb.resize(n);
    if (!eng.derivative(a, b, ws.k1a, ws.k1b)) return false;
    for (int j = 0; j < n; ++j) {
        ws.ta[j] = a[j] + 0.5 * dt * ws.k1a[j];
        ws.tb[j] = b[j] + 0.5 * dt * ws.k1b[j];
    }
    if (!eng.derivative(ws.ta, ws.tb, ws.k2a, ws.k2b)) return false;
    for (int j = 0; j < n; ++j) {
        ws.ta[j] = a[j] + 0.5 * dt * ws.k2a[j];
        ws.tb[j] = b[j] + 0.5 * dt * ws.k2b[j];
    }
    if (!eng.derivative(ws.ta, ws.tb, ws.k3a, ws.k3b)) return false;
    for (int j = 0; j < n; ++j) {
        ws.ta[j] = a[j] + dt * ws.k3a[j];
        ws.tb[j] = b[j] + dt * ws.k3b[j];
    }
    if (!eng.derivative(ws.ta, ws.tb, ws.k4a, ws.k4b)) return false;
    for (int j = 0; j < n; ++j) {
        const double na = a[j] + dt / 6.0 * (ws.k1a[j] + 2 * ws.k2a[j] + 2 * ws.k3a[j] + ws.k4a[j]);
        const double nb = b[j] + dt / 6.0 * (ws.k1b[j] + 2 * ws.k2b[j] + 2 * ws.k3b[j] + ws.k4b[j]);
        if (!(na > 0.0) || !(nb > 0.0) || !std::isfinite(na) || !std::isfinite(nb))
            return false;
        ws.ta[j] = na;
        ws.tb[j] = nb;
    }
    a.swap(ws.ta);
    b.swap(ws.tb);
    return true;
}

}  // namespace

FlowState make_flow_state(double t, AxisymMetric metric, double area_error) {
    FlowState s;
    s.t = t;
    s.metric = std::move(metric);
    s.area_error = area_error;
    s.K = gauss_curvature(s.metric);
    const MetricFaces fc = build_faces(s.metric);
    s.k_mean = weighted_mean(fc, s.K.values);
    s.f = solve_ricci_potential(s.metric, s.K);
    auto [m_thth, m_phph] = m_tensor(s.metric, s.K, s.f);
    s.m_thth = std::move(m_thth);
    s.m_phph = std::move(m_phph);
    const int n = s.metric.n();
    s.msq.resize(n);
    s.k_star = s.K.values[0];
    s.m_sup_sq = 0.0;
    for (int j = 0; j < n; ++j) {
        const double mt = s.m_thth[j] / s.metric.a[j];
        const double mp = s.m_phph[j] / s.metric.b[j];
        s.msq[j] = mt * mt + mp * mp;
        s.k_star = std::min(s.k_star, s.K.values[j]);
        s.m_sup_sq = std::max(s.m_sup_sq, s.msq[j]);
    }
    s.k_star_hat = s.k_star / s.k_mean;
    return s;
}

FlowState flow_step(const FlowState& s, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw_error(ErrorKind::domain, "flow step size must be positive and finite");
    FlowEngine eng(s.metric.grid);
    RkWorkspace ws;
    std::vector<double> a = s.metric.a, b = s.metric.b;
    if (!rk4_step(eng, ws, a, b, dt))
        throw_error(ErrorKind::step_positivity,
                    "flow step lost positivity at t=" + std::to_string(s.t) +
                        " with dt=" + std::to_string(dt));
    AxisymMetric next(s.metric.grid, std::move(a), std::move(b));
    const double drift = std::abs(area(next) - four_pi) / four_pi;
    return make_flow_state(s.t + dt, normalize_area(next), drift);
}

namespace {

/// Flags sustained growth of max|M|^2: if the series has not dipped for a
/// full decade of flow time, the flow is not contracting toward roundness.
struct DivergenceMonitor {
    double last_decrease_t = 1.0;
    double value_at_last_decrease = 0.0;
    double prev = 0.0;
    bool first = true;

    bool push(double t, double v) {
        if (first) {
            first = false;
            prev = v;
            value_at_last_decrease = v;
            last_decrease_t = t;
            return false;
        }
        if (v <= prev) {
            last_decrease_t = t;
            value_at_last_decrease = v;
        }
        prev = v;
        return t >= 10.0 * last_decrease_t && v > value_at_last_decrease;
    }
};

}  // namespace

FlowTrace run_flow(const AxisymMetric& m0, const FlowConfig& cfg) {
    if (!(cfg.t_end > 1.0))
        throw_error(ErrorKind::domain, "flow end time must exceed 1");
    if (!(cfg.sample_dt > 0.0))
        throw_error(ErrorKind::domain, "sample_dt must be positive");

    FlowTrace trace;
    trace.threshold = cfg.truncation_threshold;
    DivergenceMonitor monitor;

    const GridPtr grid = m0.grid;
    const double dtheta = grid->dtheta;
    const int n = grid->n;
    long sample_index = 0;

    FlowEngine eng(grid);
    RkWorkspace ws;
    FlowState state = make_flow_state(1.0, normalize_area(m0));
    std::vector<double> a = state.metric.a, b = state.metric.b;
    double t = 1.0, last_drift = 0.0;

    auto record = [&](const FlowState& st) {
        trace.times.push_back(st.t);
        trace.k_star.push_back(st.k_star_hat);
        trace.m_sup_sq.push_back(st.m_sup_sq);
        trace.k_mean.push_back(st.k_mean);
        trace.area_err.push_back(st.area_error);
        if ((sample_index % cfg.field_stride) == 0) {
            FieldSample fs;
            fs.t = st.t;
            fs.a = st.metric.a;
            fs.b = st.metric.b;
            fs.msq = st.msq;
            fs.k_hat.resize(st.metric.n());
            for (int j = 0; j < st.metric.n(); ++j)
                fs.k_hat[j] = st.K.values[j] / st.k_mean;
            trace.fields.push_back(std::move(fs));
        }
        ++sample_index;
    };

    record(state);
    bool done = state.m_sup_sq < cfg.truncation_threshold;
    if (done) {
        trace.truncated = true;
        trace.truncation_time = state.t;
    }

    while (!done) {
        const double t_next_sample = 1.0 + static_cast<double>(sample_index) * cfg.sample_dt;
        if (t_next_sample > cfg.t_end + 1e-12) break;

        // March to the next sample time under the CFL bound, renormalizing
        // the area each accepted step and halving dt on positivity failures.
        while (t < t_next_sample - 1e-13) {
            double min_a = a[0];
            for (double v : a) min_a = std::min(min_a, v);
            double dt = std::min(cfg.cfl * dtheta * dtheta * min_a, t_next_sample - t);
            int halvings = 0;
            while (!rk4_step(eng, ws, a, b, dt)) {
                if (++halvings > cfg.max_halvings)
                    throw_error(ErrorKind::flow_divergence,
                                "flow blew up at t=" + std::to_string(t) +
                                    ": step-size control exhausted");
                dt *= 0.5;
            }
            t += dt;
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += std::sqrt(a[j] * b[j]);
            const double raw_area = 2.0 * std::numbers::pi * dtheta * s;
            last_drift = std::abs(raw_area - four_pi) / four_pi;
            const double c = four_pi / raw_area;
            for (int j = 0; j < n; ++j) {
                a[j] *= c;
                b[j] *= c;
            }
        }
        state = make_flow_state(t, AxisymMetric(grid, a, b), last_drift);
        record(state);
        if (monitor.push(state.t, state.m_sup_sq))
            throw_error(ErrorKind::flow_divergence,
                        "max|M|^2 increased over a full decade of flow time ending at t=" +
                            std::to_string(state.t));
        if (state.m_sup_sq < cfg.truncation_threshold) {
            trace.truncated = true;
            trace.truncation_time = state.t;
            done = true;
        }
    }
    if (!trace.truncated) trace.truncation_time = trace.times.back();

    // The round-closure boundary of interp_fields must coincide with the
    // final sample.
    if (trace.fields.back().t < trace.times.back()) {
        FieldSample fs;
        fs.t = state.t;
        fs.a = state.metric.a;
        fs.b = state.metric.b;
        fs.msq = state.msq;
        fs.k_hat.resize(state.metric.n());
        for (int j = 0; j < state.metric.n(); ++j)
            fs.k_hat[j] = state.K.values[j] / state.k_mean;
        trace.fields.push_back(std::move(fs));
    }

    trace.final_state = std::move(state);

    // Decay envelopes for the tail extrapolations. The deficit floor sits
    // well above the round-off level of the curvature ratio.
    std::vector<double> deficit(trace.times.size());
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        deficit[i] = 1.0 - trace.k_star[i];
    trace.msq_fit = fit_exponential_tail(trace.times, trace.m_sup_sq,
                                         std::max(cfg.truncation_threshold * 30.0, 1e-300),
                                         0.3);
    trace.deficit_fit = fit_exponential_tail(trace.times, deficit, 1e-13, 0.3);
    return trace;
}

void interp_fields(const FlowTrace& trace, double t, InterpFields& out) {
    const auto& fs = trace.fields;
    const int n = static_cast<int>(fs.front().a.size());
    out.a.resize(n);
    out.b.resize(n);
    out.k_hat.resize(n);
    out.msq.resize(n);
    if (t >= fs.back().t) {
        // Round closure: metric frozen, curvature ratio exactly 1, M gone.
        out.a = fs.back().a;
        out.b = fs.back().b;
        std::fill(out.k_hat.begin(), out.k_hat.end(), 1.0);
        std::fill(out.msq.begin(), out.msq.end(), 0.0);
        return;
    }
    if (t <= fs.front().t) {
        out = {fs.front().a, fs.front().b, fs.front().k_hat, fs.front().msq};
        return;
    }
    auto it = std::lower_bound(fs.begin(), fs.end(), t,
                               [](const FieldSample& s, double tt) { return s.t < tt; });
    const FieldSample& hi = *it;
    const FieldSample& lo = *(it - 1);
    const double wgt = (t - lo.t) / (hi.t - lo.t);
    for (int j = 0; j < n; ++j) {
        out.a[j] = lo.a[j] + wgt * (hi.a[j] - lo.a[j]);
        out.b[j] = lo.b[j] + wgt * (hi.b[j] - lo.b[j]);
        out.k_hat[j] = lo.k_hat[j] + wgt * (hi.k_hat[j] - lo.k_hat[j]);
        out.msq[j] = lo.msq[j] + wgt * (hi.msq[j] - lo.msq[j]);
    }
}

}  // namespace hamflow
