#include "hamflow/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hamflow/tridiag.hpp"

namespace hamflow {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Cumulative trapezoid of s*max|M|^2/2 over the trace samples (the damping
/// exponent), shared by the admissibility quadrature.
std::vector<double> damping_exponent(const FlowTrace& trace) {
    const auto& t = trace.times;
    const auto& m = trace.m_sup_sq;
    std::vector<double> J(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i)
        J[i] = J[i - 1] + 0.25 * (t[i - 1] * m[i - 1] + t[i] * m[i]) * (t[i] - t[i - 1]);
    return J;
}

double holder_weighted_sup(const PrescribedScalar& rbar, double T, double alpha) {
    // Sampled sup over dyadic windows [t, 4t] of
    // t * sup_{t1 != t2} t2^alpha |f(t1) - f(t2)| / |t1 - t2|^alpha,
    // f(t) = t^2 sup_theta Rbar(t, .). Nine geometric points per window.
    if (rbar.is_zero()) return 0.0;
    double sup = 0.0;
    for (double t = 1.0; t <= std::max(T, 8.0); t *= 2.0) {
        double window = 0.0;
        double pts[9];
        for (int i = 0; i < 9; ++i) pts[i] = t * std::pow(4.0, i / 8.0);
        for (int i = 0; i < 9; ++i) {
            for (int j = i + 1; j < 9; ++j) {
                const double f1 = pts[i] * pts[i] * rbar.sup_theta(pts[i]);
                const double f2 = pts[j] * pts[j] * rbar.sup_theta(pts[j]);
                const double q = std::pow(pts[j], alpha) * std::abs(f1 - f2) /
                                 std::pow(pts[j] - pts[i], alpha);
                window = std::max(window, q);
            }
        }
        sup = std::max(sup, t * window);
    }
    return sup;
}

}  // namespace

AdmissibilityReport check_admissibility(const FlowTrace& trace, const PrescribedScalar& rbar,
                                        double H, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw_error(ErrorKind::domain, "Holder exponent alpha must lie in (0, 1)");
    if (!(H > 0.0))
        throw_error(ErrorKind::domain, "mean curvature H must be positive");

    AdmissibilityReport rep;
    rep.alpha = alpha;
    rep.mean_curvature = H;

    const double decay = rbar.integral_decay();
    rep.integral_decay_value = decay;
    rep.integral_decay_ok = std::isfinite(decay);
    rep.holder_constant = holder_weighted_sup(rbar, trace.t_end(), alpha);
    // For the closed-form families the weighted Holder bound holds exactly
    // when the power decays at least as fast as the integrability border.
    rep.holder_decay_ok = rbar.is_zero() || rbar.p >= 3.0;

    // Scalar-energy functional: sup over t of
    //   -int_1^t inf_theta(K_hat - tau^2 Rbar / 2) exp(J(tau)) dtau.
    // The infimum needs the curvature field only for angular profiles; the
    // rotationally symmetric families reduce to the k_star series.
    const auto& ts = trace.times;
    const std::vector<double> J = damping_exponent(trace);
    std::vector<double> inf_term(ts.size());
    if (rbar.family == PrescribedScalar::Family::separable) {
        InterpFields flds;
        const int n = static_cast<int>(trace.fields.front().a.size());
        const GridPtr grid = trace.final_state.metric.grid;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            interp_fields(trace, ts[i], flds);
            double inf = 1e308;
            for (int j = 0; j < n; ++j) {
                const double r = rbar.value(ts[i], grid->theta[j]);
                inf = std::min(inf, flds.k_hat[j] - 0.5 * ts[i] * ts[i] * r);
            }
            inf_term[i] = inf;
        }
    } else {
        for (std::size_t i = 0; i < ts.size(); ++i)
            inf_term[i] = trace.k_star[i] - 0.5 * ts[i] * ts[i] * rbar.sup_theta(ts[i]);
    }
    double acc = 0.0, c0 = 0.0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double g0 = inf_term[i - 1] * std::exp(J[i - 1]);
        const double g1 = inf_term[i] * std::exp(J[i]);
        acc += 0.5 * (g0 + g1) * (ts[i] - ts[i - 1]);
        c0 = std::max(c0, -acc);
    }
    // Past the trace end K_hat = 1 and the damping weight is frozen. The
    // continued integrand 1 - (tau^2/2) sup Rbar can stay negative up to
    // tau* = (c sup_psi / 2)^{1/(p-2)}; its running integral is monotone
    // decreasing there, so the only new supremum candidate is at tau*.
    if (!rbar.is_zero()) {
        const double q = 0.5 * rbar.c * rbar.sup_psi();
        if (rbar.p <= 2.0) {
            // tau^2 Rbar grows without bound: the functional diverges.
            rep.c0 = std::numeric_limits<double>::infinity();
            rep.h_threshold = std::numeric_limits<double>::infinity();
            rep.mean_curvature_positive = false;
            return rep;
        }
        const double tau_star = std::pow(q, 1.0 / (rbar.p - 2.0));
        const double te = ts.back();
        if (tau_star > te) {
            const double W = std::exp(J.back());
            // int_te^{tau*} (1 - q tau^{2-p}) dtau in closed form.
            double seg;
            if (std::abs(rbar.p - 3.0) < 1e-12)
                seg = (tau_star - te) - q * std::log(tau_star / te);
            else
                seg = (tau_star - te) -
                      q * (std::pow(tau_star, 3.0 - rbar.p) - std::pow(te, 3.0 - rbar.p)) /
                          (3.0 - rbar.p);
            c0 = std::max(c0, -(acc + W * seg));
        }
    }
    rep.c0 = c0;
    rep.h_threshold = 2.0 * std::sqrt(c0);
    // Existence gives a positive lapse, hence positive leaf mean curvature,
    // whenever the gate passes; the solver re-verifies on the computed field.
    rep.mean_curvature_positive = rep.admissible();
    return rep;
}

namespace {

struct LapseStepper {
    const FlowTrace& trace;
    const PrescribedScalar& rbar;
    GridPtr grid;
    int n;
    InterpFields flds;
    MetricFaces fc;
    std::vector<double> rbar_cells;
    std::vector<double> lower, diag, upper, rhs, scratch, reaction, u_half;

    LapseStepper(const FlowTrace& tr, const PrescribedScalar& rb)
        : trace(tr), rbar(rb), grid(tr.final_state.metric.grid), n(grid->n) {
        lower.resize(n);
        diag.resize(n);
        upper.resize(n);
        rhs.resize(n);
        scratch.resize(n);
        reaction.resize(n);
        u_half.resize(n);
    }

    void load_fields(double t) {
        interp_fields(trace, t, flds);
        AxisymMetric m;
        m.grid = grid;
        m.a = flds.a;
        m.b = flds.b;
        fc = build_faces(m);
        rbar_cells.resize(n);
        for (int j = 0; j < n; ++j) rbar_cells[j] = rbar.value(t, grid->theta[j]);
    }

    // Reaction terms at the currently loaded fields:
    // (t^2/4)|M|^2 u + u/2 - (2 K_hat - t^2 Rbar) u^3 / 4.
    void eval_reaction(const std::vector<double>& u, double t, std::vector<double>& out) {
        const double t2 = t * t;
        for (int j = 0; j < n; ++j) {
            const double u1 = u[j];
            out[j] = 0.25 * t2 * flds.msq[j] * u1 + 0.5 * u1 -
                     0.25 * (2.0 * flds.k_hat[j] - t2 * rbar_cells[j]) * u1 * u1 * u1;
        }
    }

    // Solves (I - (h/2) D) x = rhs where D = diag(coef) * lap with the
    // currently loaded metric faces; coef = u_lag^2 / 2 per cell.
    void implicit_solve(double h, const std::vector<double>& u_lag, std::vector<double>& x) {
        const double dt2 = fc.dtheta * fc.dtheta;
        for (int j = 0; j < n; ++j) {
            const double coef = 0.5 * u_lag[j] * u_lag[j] * 0.5 * h / (dt2 * fc.mu[j]);
            const double cl = coef * fc.c_face[j];
            const double cu = coef * fc.c_face[j + 1];
            lower[j] = -cl;
            upper[j] = -cu;
            diag[j] = 1.0 + cl + cu;
        }
        thomas_solve(lower, diag, upper, x, scratch);
    }

    // One midpoint predictor-corrector substep s -> s + h. Returns false on
    // positivity/finiteness failure.
    bool substep(std::vector<double>& u, double s, double h) {
        const double t_mid = std::exp(s + 0.5 * h);

        // Predictor: implicit half-step to the midpoint, all coefficients at t_mid.
        load_fields(t_mid);
        eval_reaction(u, t_mid, reaction);
        for (int j = 0; j < n; ++j) u_half[j] = u[j] + 0.5 * h * reaction[j];
        implicit_solve(h, u, u_half);  // (I - (h/2) D) u_half = u + (h/2) R(u)
        for (int j = 0; j < n; ++j)
            if (!(u_half[j] > 0.0) || !std::isfinite(u_half[j])) return false;

        // Corrector: trapezoidal diffusion around the midpoint coefficient,
        // reactions at the midpoint value and time.
        eval_reaction(u_half, t_mid, reaction);
        const double dt2 = fc.dtheta * fc.dtheta;
        for (int j = 0; j < n; ++j) {
            const double coef = 0.25 * u_half[j] * u_half[j] * h / (dt2 * fc.mu[j]);
            const double cl = coef * fc.c_face[j];
            const double cu = coef * fc.c_face[j + 1];
            lower[j] = -cl;
            upper[j] = -cu;
            diag[j] = 1.0 + cl + cu;
            // rhs = u + (h/2) D u + h R(u_half)
            const double flux_lo =
                (j > 0) ? fc.c_face[j] * (u[j] - u[j - 1]) : 0.0;
            const double flux_hi =
                (j + 1 < n) ? fc.c_face[j + 1] * (u[j + 1] - u[j]) : 0.0;
            const double Du = 0.5 * u_half[j] * u_half[j] * (flux_hi - flux_lo) / (dt2 * fc.mu[j]);
            rhs[j] = u[j] + 0.5 * h * Du + h * reaction[j];
        }
        thomas_solve(lower, diag, upper, rhs, scratch);
        for (int j = 0; j < n; ++j)
            if (!(rhs[j] > 0.0) || !std::isfinite(rhs[j])) return false;
        u.swap(rhs);
        return true;
    }
};

}  // namespace

std::vector<double> ExtensionSolution::u_at(double t) const {
    if (t <= times.front()) return u.front();
    if (t >= times.back()) return u.back();
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = std::log(t / times[i - 1]) / std::log(times[i] / times[i - 1]);
    std::vector<double> row(u[i].size());
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = u[i - 1][j] + w * (u[i][j] - u[i - 1][j]);
    return row;
}

double ExtensionSolution::leaf_hawking_at(double t) const {
    if (t <= times.front()) return leaf_hawking.front();
    if (t >= times.back()) return leaf_hawking.back();
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - times.begin());
    const double w = std::log(t / times[i - 1]) / std::log(times[i] / times[i - 1]);
    return leaf_hawking[i - 1] + w * (leaf_hawking[i] - leaf_hawking[i - 1]);
}

namespace {

ExtensionSolution solve_lapse_impl(const FlowTrace& trace, const PrescribedScalar& rbar,
                                   const std::vector<double>& u0, double H_min,
                                   const LapseConfig& cfg) {
    if (!(cfg.t_max >= 10.0))
        throw_error(ErrorKind::domain, "extension horizon t_max must be >= 10");
    if (!cfg.skip_admissibility_check) {
        const AdmissibilityReport rep =
            check_admissibility(trace, rbar, H_min, cfg.alpha);
        if (!rep.admissible())
            throw_error(ErrorKind::inadmissible,
                        "extension inadmissible: H=" + std::to_string(H_min) +
                            " needs H > " + std::to_string(rep.h_threshold) +
                            (rep.integral_decay_ok ? "" : "; scalar decay integral diverges"));
    }

    ExtensionSolution sol;
    sol.rbar = rbar;
    sol.mean_curvature = H_min;
    sol.n = static_cast<int>(u0.size());

    // Geometric output grid including a few canonical leaves.
    std::vector<double> out_times;
    const double s_end = std::log(cfg.t_max);
    for (int i = 0; i <= cfg.out_samples; ++i)
        out_times.push_back(std::exp(s_end * i / cfg.out_samples));
    for (double t : {10.0, 50.0, 100.0})
        if (t < cfg.t_max) out_times.push_back(t);
    std::sort(out_times.begin(), out_times.end());
    out_times.erase(std::unique(out_times.begin(), out_times.end(),
                                [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                    out_times.end());

    LapseStepper stepper(trace, rbar);
    std::vector<double> u = u0;

    auto record = [&](double t, const std::vector<double>& uu) {
        stepper.load_fields(t);
        double inv2 = 0.0, den = 0.0, mn = uu[0], mx = uu[0];
        for (int j = 0; j < stepper.n; ++j) {
            inv2 += stepper.fc.mu[j] / (uu[j] * uu[j]);
            den += stepper.fc.mu[j];
            mn = std::min(mn, uu[j]);
            mx = std::max(mx, uu[j]);
        }
        sol.times.push_back(t);
        sol.u.push_back(uu);
        sol.leaf_hawking.push_back(0.5 * t * (1.0 - inv2 / den));
        sol.min_u.push_back(mn);
        sol.max_u.push_back(mx);
        sol.min_leaf_h.push_back(2.0 / (t * mx));
    };

    record(1.0, u);
    double s = 0.0;
    std::vector<double> u_try;
    for (std::size_t i = 1; i < out_times.size(); ++i) {
        const double s_target = std::log(out_times[i]);
        const int nsub = std::max(1, static_cast<int>(std::ceil((s_target - s) / cfg.ds)));
        const double h0 = (s_target - s) / nsub;
        while (s < s_target - 1e-15) {
            double h = std::min(h0, s_target - s);
            int halvings = 0;
            for (;;) {
                u_try = u;
                if (stepper.substep(u_try, s, h)) {
                    u.swap(u_try);
                    s += h;
                    break;
                }
                if (++halvings > cfg.max_halvings)
                    throw_error(ErrorKind::blow_up,
                                "lapse lost positivity near t=" + std::to_string(std::exp(s)) +
                                    "; admissibility margin too thin");
                h *= 0.5;
            }
        }
        s = s_target;
        record(out_times[i], u);
    }

    sol.min_leaf_h_overall = *std::min_element(sol.min_leaf_h.begin(), sol.min_leaf_h.end());

    const auto [est, tail] = adm_mass(sol);
    sol.adm_estimate = est;
    sol.adm_tail_bound = tail;
    return sol;
}

}  // namespace

ExtensionSolution solve_lapse(const FlowTrace& trace, const PrescribedScalar& rbar, double H,
                              const LapseConfig& cfg) {
    if (!(H > 0.0)) throw_error(ErrorKind::domain, "mean curvature H must be positive");
    const int n = trace.final_state.metric.n();
    std::vector<double> u0(n, 2.0 / H);
    return solve_lapse_impl(trace, rbar, u0, H, cfg);
}

ExtensionSolution solve_lapse(const FlowTrace& trace, const PrescribedScalar& rbar,
                              const ScalarField& H, const LapseConfig& cfg) {
    const int n = trace.final_state.metric.n();
    if (H.size() != n)
        throw_error(ErrorKind::domain, "mean-curvature field size does not match the trace grid");
    std::vector<double> u0(n);
    double h_min = 1e308;
    for (int j = 0; j < n; ++j) {
        if (!(H.values[j] > 0.0))
            throw_error(ErrorKind::domain, "mean curvature must be positive everywhere");
        u0[j] = 2.0 / H.values[j];
        h_min = std::min(h_min, H.values[j]);
    }
    return solve_lapse_impl(trace, rbar, u0, h_min, cfg);
}

ScalarField leaf_mean_curvature(const ExtensionSolution& sol, const GridPtr& grid, double t) {
    if (t < sol.times.front() - 1e-12 || t > sol.times.back() + 1e-12)
        throw_error(ErrorKind::domain, "leaf time outside the solution range");
    const std::vector<double> row = sol.u_at(t);
    ScalarField out;
    out.grid = grid;
    out.parity = Parity::even;
    out.values.resize(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out.values[j] = 2.0 / (t * row[j]);
    return out;
}

std::pair<double, double> adm_mass(const ExtensionSolution& sol) {
    const double T = sol.times.back();
    const double tail = sol.rbar.e_tail(T);

    // Cauchy check on the tail-completed series over the last decade: the
    // prescribed-scalar drift is removed, so residual motion means the
    // leaf masses never settled.
    double mn = 1e308, mx = -1e308;
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        if (sol.times[i] < T / 10.0) continue;
        const double completed = sol.leaf_hawking[i] + sol.rbar.e_tail(sol.times[i]);
        mn = std::min(mn, completed);
        mx = std::max(mx, completed);
    }
    const double osc = mx - mn;
    const double osc_tol = std::max(1e-4, 10.0 * tail);
    if (osc > osc_tol)
        throw_error(ErrorKind::no_limit,
                    "leaf Hawking masses did not settle: oscillation " +
                        std::to_string(osc) + " over the last decade");
    return {sol.leaf_hawking.back(), tail};
}

double hawking_growth_rate(const FlowTrace& trace, const ExtensionSolution& sol,
                           std::size_t sample_index) {
    const double t = sol.times[sample_index];
    const std::vector<double>& u = sol.u[sample_index];
    const GridPtr grid = trace.final_state.metric.grid;
    const int n = grid->n;

    InterpFields flds;
    interp_fields(trace, t, flds);
    AxisymMetric m;
    m.grid = grid;
    m.a = flds.a;
    m.b = flds.b;
    const MetricFaces fc = build_faces(m);

    const double grad_term = grad_sq_over_sq_integral(fc, u);
    double rest = 0.0;
    for (int j = 0; j < n; ++j) {
        const double rb = sol.rbar.value(t, grid->theta[j]);
        rest += fc.mu[j] * (0.5 * t * t * flds.msq[j] / (u[j] * u[j]) + 0.5 * t * t * rb);
    }
    rest *= two_pi * fc.dtheta;
    return (grad_term + rest) / (8.0 * std::numbers::pi);
}

}  // namespace hamflow
