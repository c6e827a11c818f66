#pragma once

#include <vector>

#include "hamflow/axisym_metric.hpp"
#include "hamflow/scalar_field.hpp"

namespace hamflow {

/// Face-averaged metric data shared by the curvature, Laplacian and Hessian
/// stencils. Faces are indexed 0..n with face 0 at theta=0 and face n at
/// theta=pi; parity ghosts make both pole fluxes vanish identically.
struct MetricFaces {
    int n = 0;
    double dtheta = 0.0;
    std::vector<double> h;       // sqrt(a) at cells
    std::vector<double> w;       // sqrt(b) at cells
    std::vector<double> mu;      // h*w at cells (measure density)
    std::vector<double> h_face;  // face-averaged h, size n+1
    std::vector<double> c_face;  // face-averaged w/h (Laplacian coefficient), size n+1
    double area = 0.0;           // 2*pi*dtheta*sum(mu)
};

MetricFaces build_faces(const AxisymMetric& m);
/// In-place variant reusing the face arrays.
void build_faces(const std::vector<double>& a, const std::vector<double>& b, double dtheta,
                 MetricFaces& fc);

/// 2*pi*dtheta * sum_j phi_j * sqrt(a_j b_j)
double integrate(const AxisymMetric& m, const ScalarField& phi);
double area(const AxisymMetric& m);

/// Area-weighted mean of phi.
double weighted_mean(const MetricFaces& fc, const std::vector<double>& phi);

/// Conformal rescale so the total area is exactly 4*pi.
AxisymMetric normalize_area(const AxisymMetric& m);

/// Gauss curvature K = -(1/(h w)) d/dtheta[(1/h) dw/dtheta] in flux form.
ScalarField gauss_curvature(const AxisymMetric& m);
void gauss_curvature(const MetricFaces& fc, std::vector<double>& out);

/// Laplace-Beltrami operator in flux form, for even-parity fields.
/// Annihilates constants exactly and is self-adjoint in the discrete
/// L^2(d mu) inner product.
ScalarField laplacian(const AxisymMetric& m, const ScalarField& phi);
void laplacian_apply(const MetricFaces& fc, const std::vector<double>& phi,
                     std::vector<double>& out);

/// theta-theta component of the Hessian of an even field:
/// f'' - (h'/h) f', discretized as h * d/dtheta[(1/h) f'] in flux form so
/// that together with the remainder term the discrete trace of the Hessian
/// equals the discrete Laplacian exactly.
void hessian_thth(const MetricFaces& fc, const std::vector<double>& f,
                  std::vector<double>& out);

/// Solves lap(f) = rhs for the mean-zero f. The rhs must have zero
/// area-weighted mean (its residual mean is projected out); the singular
/// tridiagonal system is pinned at the last cell and re-centered, with one
/// round of iterative refinement.
std::vector<double> solve_poisson_meanzero(const MetricFaces& fc,
                                           std::vector<double> rhs);

/// Allocation-free variant for hot loops.
struct PoissonWorkspace {
    std::vector<double> lower, diag, upper, lo, di, up, scratch, resid, corr, rhs;
};
void solve_poisson_meanzero(const MetricFaces& fc, const std::vector<double>& rhs,
                            std::vector<double>& f, PoissonWorkspace& ws);

/// Face-form Dirichlet energy sum_faces c_f * ((du)^2 / dtheta) / (u_j u_{j+1})
/// scaled by 2*pi, i.e. the exact discrete counterpart of
/// integral |grad u|^2 / u^2 d mu under summation by parts.
double grad_sq_over_sq_integral(const MetricFaces& fc, const std::vector<double>& u);

}  // namespace hamflow
