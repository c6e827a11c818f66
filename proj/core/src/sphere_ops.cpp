#include "hamflow/sphere_ops.hpp"

#include <cmath>
#include <numbers>

#include "hamflow/tridiag.hpp"

namespace hamflow {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double four_pi = 4.0 * std::numbers::pi;
}  // namespace

void build_faces(const std::vector<double>& a, const std::vector<double>& b, double dtheta,
                 MetricFaces& fc) {
    const int n = static_cast<int>(a.size());
    fc.n = n;
    fc.dtheta = dtheta;
    fc.h.resize(n);
    fc.w.resize(n);
    fc.mu.resize(n);
    fc.h_face.resize(n + 1);
    fc.c_face.resize(n + 1);
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        fc.h[j] = std::sqrt(a[j]);
        fc.w[j] = std::sqrt(b[j]);
        fc.mu[j] = fc.h[j] * fc.w[j];
        s += fc.mu[j];
    }
    fc.area = two_pi * dtheta * s;
    // Interior faces average the two neighbors; parity ghosts (h even,
    // w odd) give h_face = h at the poles and a vanishing Laplacian
    // coefficient there, which is exactly the regularity condition.
    fc.h_face[0] = fc.h[0];
    fc.h_face[n] = fc.h[n - 1];
    fc.c_face[0] = 0.0;
    fc.c_face[n] = 0.0;
    for (int j = 1; j < n; ++j) {
        fc.h_face[j] = 0.5 * (fc.h[j - 1] + fc.h[j]);
        fc.c_face[j] = 0.5 * (fc.w[j - 1] / fc.h[j - 1] + fc.w[j] / fc.h[j]);
    }
}

MetricFaces build_faces(const AxisymMetric& m) {
    MetricFaces fc;
    build_faces(m.a, m.b, m.grid->dtheta, fc);
    return fc;
}

double integrate(const AxisymMetric& m, const ScalarField& phi) {
    const int n = m.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += phi.values[j] * std::sqrt(m.a[j] * m.b[j]);
    return two_pi * m.grid->dtheta * s;
}

double area(const AxisymMetric& m) {
    const int n = m.n();
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::sqrt(m.a[j] * m.b[j]);
    return two_pi * m.grid->dtheta * s;
}

double weighted_mean(const MetricFaces& fc, const std::vector<double>& phi) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < fc.n; ++j) {
        num += phi[j] * fc.mu[j];
        den += fc.mu[j];
    }
    return num / den;
}

AxisymMetric normalize_area(const AxisymMetric& m) {
    m.validate();
    const double c = four_pi / area(m);
    AxisymMetric out = m;
    for (int j = 0; j < m.n(); ++j) {
        out.a[j] *= c;
        out.b[j] *= c;
    }
    return out;
}

void gauss_curvature(const MetricFaces& fc, std::vector<double>& out) {
    const int n = fc.n;
    const double dt = fc.dtheta;
    out.resize(n);
    // gw[i] = (1/h) dw/dtheta at face i; odd w ghosts at the poles.
    double gw_prev = 2.0 * fc.w[0] / (dt * fc.h_face[0]);
    for (int j = 0; j < n; ++j) {
        double gw_next;
        if (j + 1 < n)
            gw_next = (fc.w[j + 1] - fc.w[j]) / (dt * fc.h_face[j + 1]);
        else
            gw_next = -2.0 * fc.w[n - 1] / (dt * fc.h_face[n]);
        out[j] = -(gw_next - gw_prev) / (dt * fc.mu[j]);
        gw_prev = gw_next;
    }
}

ScalarField gauss_curvature(const AxisymMetric& m) {
    m.validate();
    const MetricFaces fc = build_faces(m);
    ScalarField K;
    K.grid = m.grid;
    K.parity = Parity::even;
    gauss_curvature(fc, K.values);
    return K;
}

void laplacian_apply(const MetricFaces& fc, const std::vector<double>& phi,
                     std::vector<double>& out) {
    const int n = fc.n;
    const double dt = fc.dtheta;
    out.resize(n);
    double flux_prev = 0.0;  // pole face: coefficient vanishes
    for (int j = 0; j < n; ++j) {
        const double flux_next =
            (j + 1 < n) ? fc.c_face[j + 1] * (phi[j + 1] - phi[j]) / dt : 0.0;
        out[j] = (flux_next - flux_prev) / (dt * fc.mu[j]);
        flux_prev = flux_next;
    }
}

ScalarField laplacian(const AxisymMetric& m, const ScalarField& phi) {
    if (phi.parity != Parity::even)
        throw_error(ErrorKind::domain, "laplacian requires an even-parity field");
    const MetricFaces fc = build_faces(m);
    ScalarField out;
    out.grid = m.grid;
    out.parity = Parity::even;
    laplacian_apply(fc, phi.values, out.values);
    return out;
}

void hessian_thth(const MetricFaces& fc, const std::vector<double>& f,
                  std::vector<double>& out) {
    const int n = fc.n;
    const double dt = fc.dtheta;
    out.resize(n);
    double g_prev = 0.0;  // even f: zero gradient across the pole
    for (int j = 0; j < n; ++j) {
        const double g_next =
            (j + 1 < n) ? (f[j + 1] - f[j]) / (dt * fc.h_face[j + 1]) : 0.0;
        out[j] = fc.h[j] * (g_next - g_prev) / dt;
        g_prev = g_next;
    }
}

void solve_poisson_meanzero(const MetricFaces& fc, const std::vector<double>& rhs_in,
                            std::vector<double>& f, PoissonWorkspace& ws) {
    const int n = fc.n;
    const double dt2 = fc.dtheta * fc.dtheta;

    ws.rhs = rhs_in;
    auto& rhs = ws.rhs;

    // Project out the residual weighted mean; the continuous problem is
    // solvable only for mean-zero sources.
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
        num += rhs[j] * fc.mu[j];
        den += fc.mu[j];
    }
    const double mean = num / den;
    for (int j = 0; j < n; ++j) rhs[j] -= mean;

    // Assemble the full operator rows: lap(f)_j = (c_{j+1} (f_{j+1}-f_j)
    // - c_j (f_j - f_{j-1})) / (dt^2 mu_j), with zero pole fluxes.
    ws.lower.resize(n);
    ws.diag.resize(n);
    ws.upper.resize(n);
    for (int j = 0; j < n; ++j) {
        const double cl = fc.c_face[j] / (dt2 * fc.mu[j]);
        const double cu = fc.c_face[j + 1] / (dt2 * fc.mu[j]);
        ws.lower[j] = cl;
        ws.upper[j] = cu;
        ws.diag[j] = -(cl + cu);
    }

    // Pin f_{n-1} = 0 and solve the leading (n-1)x(n-1) block; the dropped
    // last equation is implied by the rank-(n-1) structure once the rhs is
    // mean-free. Then re-center to the weighted-mean-zero representative,
    // with one round of iterative refinement on the full system.
    ws.lo.assign(ws.lower.begin(), ws.lower.end() - 1);
    ws.di.assign(ws.diag.begin(), ws.diag.end() - 1);
    ws.up.assign(ws.upper.begin(), ws.upper.end() - 1);
    ws.scratch.resize(n);

    auto reduced_solve = [&](std::vector<double>& b) {
        b.resize(n - 1);
        thomas_solve(ws.lo, ws.di, ws.up, b, ws.scratch);
        b.push_back(0.0);
    };

    f = rhs;
    reduced_solve(f);

    ws.resid.resize(n);
    tridiag_apply(ws.lower, ws.diag, ws.upper, f, ws.resid);
    for (int j = 0; j < n; ++j) ws.resid[j] = rhs[j] - ws.resid[j];
    ws.corr = ws.resid;
    reduced_solve(ws.corr);
    for (int j = 0; j < n; ++j) f[j] += ws.corr[j];

    double fm = 0.0;
    for (int j = 0; j < n; ++j) fm += f[j] * fc.mu[j];
    fm /= den;
    for (int j = 0; j < n; ++j) f[j] -= fm;
}

std::vector<double> solve_poisson_meanzero(const MetricFaces& fc, std::vector<double> rhs) {
    PoissonWorkspace ws;
    std::vector<double> f;
    solve_poisson_meanzero(fc, rhs, f, ws);
    return f;
}

double grad_sq_over_sq_integral(const MetricFaces& fc, const std::vector<double>& u) {
    const int n = fc.n;
    double s = 0.0;
    for (int j = 1; j < n; ++j) {
        const double du = u[j] - u[j - 1];
        s += fc.c_face[j] * du * du / (fc.dtheta * u[j] * u[j - 1]);
    }
    return two_pi * s;
}

}  // namespace hamflow
