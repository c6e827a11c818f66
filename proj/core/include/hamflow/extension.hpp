#pragma once

#include <utility>
#include <vector>

#include "hamflow/prescribed_scalar.hpp"
#include "hamflow/ricci_flow.hpp"
#include "hamflow/scalar_field.hpp"

namespace hamflow {

/// Entry conditions for building an asymptotically flat extension with
/// prescribed scalar curvature over a flow trace.
struct AdmissibilityReport {
    bool integral_decay_ok = false;
    double integral_decay_value = 0.0;  // int_1^inf sup|Rbar| t^2 dt
    bool holder_decay_ok = false;
    double holder_constant = 0.0;  // sampled sup over dyadic windows of t*||Rbar t^2||_alpha
    double c0 = 0.0;               // scalar-energy functional
    double h_threshold = 0.0;      // 2 sqrt(c0)
    bool mean_curvature_positive = false;
    double alpha = 0.5;
    double mean_curvature = 0.0;  // the H this report was evaluated for

    bool admissible() const {
        return integral_decay_ok && holder_decay_ok &&
               mean_curvature * mean_curvature > 4.0 * c0;
    }
};

AdmissibilityReport check_admissibility(const FlowTrace& trace, const PrescribedScalar& rbar,
                                        double H, double alpha);

struct LapseConfig {
    double t_max = 200.0;
    double ds = 1e-4;        // substep in s = ln t
    int out_samples = 1200;  // geometric output grid over [1, t_max]
    double alpha = 0.5;
    int max_halvings = 20;
    bool skip_admissibility_check = false;  // diagnostics only
};

/// Lapse field u(t, theta) of the extension u^2 dt^2 + t^2 g_t together with
/// the leaf Hawking-mass series (t/2)(1 - <u^-2>) on the unit-area leaves.
struct ExtensionSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> u;  // one grid row per output time
    std::vector<double> leaf_hawking;
    std::vector<double> min_u, max_u, min_leaf_h;
    double adm_estimate = 0.0;
    double adm_tail_bound = 0.0;
    double min_leaf_h_overall = 0.0;
    double mean_curvature = 0.0;
    PrescribedScalar rbar;
    int n = 0;

    /// Row of u at an output time (linear in ln t between samples).
    std::vector<double> u_at(double t) const;
    double leaf_hawking_at(double t) const;
};

/// Integrates the lapse equation
///   t du/dt = 1/2 u^2 lap(u) + (t^2/4)|M|^2 u + 1/2 u - 1/4 (2K - t^2 Rbar) u^3
/// in logarithmic time with a semi-implicit midpoint predictor-corrector
/// (diffusion implicit with the midpoint-lagged coefficient, reactions at the
/// midpoint). K enters normalized by its area mean, which keeps the
/// rotationally symmetric closed forms exact on the discrete grid.
/// Initial data u(1,.) = 2/H. Throws inadmissible when the report fails, or
/// blow_up when positivity is lost despite step halving.
ExtensionSolution solve_lapse(const FlowTrace& trace, const PrescribedScalar& rbar,
                              double H, const LapseConfig& cfg = {});

/// Same with a non-constant boundary mean curvature H(theta):
/// u(1, x) = 2/H(x), admissibility requires min H > 2 sqrt(C0).
ExtensionSolution solve_lapse(const FlowTrace& trace, const PrescribedScalar& rbar,
                              const ScalarField& H, const LapseConfig& cfg = {});

/// Mean curvature of the leaf Sigma_t: 2/(t u(t, .)).
ScalarField leaf_mean_curvature(const ExtensionSolution& sol, const GridPtr& grid, double t);

/// ADM mass estimate: the last leaf Hawking mass, plus the closed-form tail
/// of the prescribed-scalar contribution past t_max. Throws no_limit when the
/// tail-corrected series still oscillates over the last decade.
std::pair<double, double> adm_mass(const ExtensionSolution& sol);

/// Quadrature of the Hawking-mass growth rate
///   (1/8 pi) oint |grad u|^2/u^2 + (t^2/2)|M|^2 u^-2 + (t^2/2) Rbar  d mu
/// at output sample index i, using the summation-by-parts gradient form that
/// makes the identity exact in the semi-discrete system.
double hawking_growth_rate(const FlowTrace& trace, const ExtensionSolution& sol,
                           std::size_t sample_index);

}  // namespace hamflow
