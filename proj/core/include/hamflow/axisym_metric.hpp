#pragma once

#include <string>
#include <vector>

#include "hamflow/polar_grid.hpp"

namespace hamflow {

/// Axisymmetric metric on the 2-sphere in warped-product form
///   g = a(theta) dtheta^2 + b(theta) dphi^2,
/// sampled at cell centers. Both coefficient arrays must be positive and
/// finite; sqrt(b) is odd across the poles, a and b are even.
struct AxisymMetric {
    GridPtr grid;
    std::vector<double> a;
    std::vector<double> b;

    AxisymMetric() = default;
    AxisymMetric(GridPtr g, std::vector<double> a_in, std::vector<double> b_in);

    int n() const { return grid->n; }

    /// Throws invalid_metric unless every component is finite and positive.
    void validate() const;
};

/// Built-in metric families. All constructors return area-normalized
/// metrics (total area exactly 4*pi in the discrete quadrature).
AxisymMetric make_round(const GridPtr& g);

/// Induced metric of the spheroid x^2/A^2 + y^2/B^2 + z^2/C^2 = 1.
/// Requires A == B (axisymmetry).
AxisymMetric make_ellipsoid(const GridPtr& g, double A, double B, double C);

/// Warp profile q(theta) = 1 + sum_k coeffs[k] * cos(2(k+1) theta) applied to
/// the round sphere: sqrt(b) = sin(theta) q(theta), a = q(0)^2. Even
/// harmonics keep the metric regular at both poles. Requires q > 0.
AxisymMetric make_warped(const GridPtr& g, const std::vector<double>& coeffs);

/// Closed-form Gauss curvature of the (un-normalized) spheroid with
/// semi-axes (A, A, C), used as a test oracle.
double ellipsoid_gauss_curvature(double A, double C, double theta);

/// Parses a metric family spec such as "round", "ellipsoid(1,1,0.8)" or
/// "warped(0.05,-0.01)". Throws a config error on malformed input.
AxisymMetric parse_metric_spec(const std::string& spec, const GridPtr& g);

}  // namespace hamflow
