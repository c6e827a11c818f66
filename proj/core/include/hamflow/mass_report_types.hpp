#pragma once

namespace hamflow {

struct RigidityFlags {
    bool triggered = false;  // |adm - m_H(Sigma)| < tol
    bool r_is_zero = false;
    bool metric_is_round = false;
    bool u_is_rotsym = false;
    bool u_matches_model = false;  // Schwarzschild closed form, or u = 1 when massless
    double dev_round = 0.0;        // 1 - k_star(1)
    double dev_rotsym = 0.0;       // worst spatial oscillation of u
    double dev_model = 0.0;        // worst relative deviation from the closed form
    bool all_pass() const {
        return r_is_zero && metric_is_round && u_is_rotsym && u_matches_model;
    }
};

struct MassReport {
    double m_h_sigma = 0.0;
    double m_as = 0.0, m_as_tail = 0.0;
    double e_value = 0.0, e_tail = 0.0;
    double adm_estimate = 0.0, adm_tail = 0.0;
    /// (m_as + m_h_sigma + e) - adm_estimate
    double inequality_slack = 0.0;
    /// adm_estimate - m_h_sigma, the rigidity gap
    double rigidity_gap = 0.0;
    bool inequality_ok = false;
    bool per_time_bound_ok = false;
    double per_time_worst_violation = 0.0;
    double tolerance_budget = 0.0;  // sum of tail bounds + fixed quadrature allowance
    RigidityFlags rigidity;
};

}  // namespace hamflow
