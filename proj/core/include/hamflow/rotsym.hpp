#pragma once

#include <string>
#include <vector>

namespace hamflow {

/// Nondecreasing Hawking-mass profile m_H(r) characterizing a rotationally
/// symmetric asymptotically flat 3-metric (f(r))^2 dr^2 + r^2 g_{S^2}.
/// Families:
///   constant(m)                    m_H = m (Schwarzschild / Euclidean)
///   powerlaw_approach(m_inf, p)    m_H = m_inf (1 - r^-p)
///   table(r_i, m_i)                monotone cubic (Fritsch-Carlson) interpolant
struct MassProfile {
    enum class Kind { constant, powerlaw, table };

    Kind kind = Kind::constant;
    double r_min = 0.0;
    double m_const = 0.0;
    double m_inf = 0.0, p = 0.0;
    std::vector<double> r_knots, m_knots, d_knots;  // PCHIP knot derivatives

    static MassProfile constant(double m);
    static MassProfile powerlaw_approach(double m_inf, double p);
    static MassProfile table(std::vector<double> r, std::vector<double> m);

    double value(double r) const;
    double deriv(double r) const;
    /// Second derivative; for tables this is the piecewise-cubic value, which
    /// jumps at the knots (see ProfileDecayReport::verifiable).
    double second_deriv(double r) const;
    /// Largest jump of the second derivative across interior knots, relative
    /// to its local scale. Zero for the analytic families.
    double second_deriv_knot_jump() const;

    double adm_limit() const;

    std::string spec_string() const;
    static MassProfile parse(const std::string& spec);
};

/// Scalar curvature realized by the profile: Rbar(r) = 4 m_H'(r) / r^2.
/// Throws below max(r_min, 1).
double scalar_from_profile(const MassProfile& p, double t);

/// Schwarzschild radial lapse u(t) = (1 - 2m/t)^{-1/2}; throws at/inside the
/// horizon t <= 2m.
double schwarzschild_u(double m, double t);

/// Lapse of the metric encoded by a profile: (1 - 2 m_H(t)/t)^{-1/2}.
double rotsym_u(const MassProfile& p, double t);

/// Decay-condition report for a profile: measures sup_r r^2 |m_H''| over
/// dyadic windows and the implied weighted-Holder constant
/// 16 * 3^{1-alpha} * r * sup |m_H''|.
struct ProfileDecayReport {
    bool verifiable = true;  // false when m_H'' jumps at table knots
    bool passes = false;
    double sup_r2_mpp = 0.0;
    double holder_constant = 0.0;
    double alpha = 0.5;
};
ProfileDecayReport check_profile_decay(const MassProfile& p, double alpha,
                                       double r_max = 1e6);

/// Admissibility functional in the rotationally symmetric reduction:
/// sup over [1, t_max] of 2 m_H(t) - 2 m_H(1) - (t - 1), clamped at 0.
double c0_rotsym(const MassProfile& p, double t_max);

}  // namespace hamflow
