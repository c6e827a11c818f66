#pragma once

#include <string>
#include <vector>

#include "hamflow/polar_grid.hpp"

namespace hamflow {

/// Prescribed scalar curvature field Rbar(t, theta) of the 3-metric, from a
/// small set of closed-form families:
///   zero                      Rbar = 0
///   rotsym_power(c, p)        Rbar = c * t^-p
///   separable(c, p; q0, q1,...) Rbar = c * t^-p * psi(theta),
///                             psi = sum_k q_k cos^{2k}(theta) >= 0
/// The closed forms make the decay integrals and tail corrections exact.
struct PrescribedScalar {
    enum class Family { zero, rotsym_power, separable };

    Family family = Family::zero;
    double c = 0.0;
    double p = 0.0;
    std::vector<double> psi_poly;  // separable only
    double sup_psi_cache = 1.0;    // set at construction for separable profiles

    static PrescribedScalar zero();
    static PrescribedScalar rotsym_power(double c, double p);
    static PrescribedScalar separable(double c, double p, std::vector<double> psi_poly);

    bool is_zero() const { return family == Family::zero || c == 0.0; }

    double psi(double theta) const;
    double sup_psi() const;  // exact for the even-polynomial profiles
    double value(double t, double theta) const;
    /// sup over theta of Rbar(t, .)
    double sup_theta(double t) const;

    /// int_1^inf sup|Rbar| t^2 dt; +inf when p <= 3.
    double integral_decay() const;
    /// 1/2 int_T^inf (tau^2/2) sup Rbar(tau) dtau (the mass-tail correction).
    double e_tail(double T) const;

    /// Compact round-trippable form, e.g. "rotsym_power(0.05,4)".
    std::string spec_string() const;
    static PrescribedScalar parse(const std::string& spec);
};

}  // namespace hamflow
