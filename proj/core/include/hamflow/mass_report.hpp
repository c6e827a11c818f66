#pragma once

#include <utility>

#include "hamflow/asphericity.hpp"
#include "hamflow/extension.hpp"
#include "hamflow/mass_report_types.hpp"
#include "hamflow/prescribed_scalar.hpp"
#include "hamflow/ricci_flow.hpp"

namespace hamflow {

/// Hawking mass of the unit-area boundary leaf:
/// 1/2 (1 - (1/16pi) oint H^2 d mu); for constant H this is (1 - H^2/4)/2.
double hawking_mass_initial(const AxisymMetric& m, double H);
double hawking_mass_initial(const AxisymMetric& m, const ScalarField& H);

/// Mass contribution of the prescribed scalar curvature:
///   e_t = 1/2 int_1^t (tau^2/2) sup Rbar(tau) E(tau, t) dtau,
/// trapezoidal on the trace samples, continued on a fine geometric grid past
/// the truncation time where E is frozen.
double e_term(const FlowTrace& trace, const PrescribedScalar& rbar, double t);

/// Limit of e_t with its closed-form tail; {value, tail_bound}. Throws when
/// the decay integral diverges (p <= 3).
std::pair<double, double> e_limit(const FlowTrace& trace, const PrescribedScalar& rbar);

/// Assembles the mass inequality report for one scenario and verifies the
/// per-leaf bound m_H(Sigma_t) <= m_aS(t) + e_t + m_H(Sigma) at every output
/// time. A violation beyond the combined tolerance marks the report instead
/// of throwing: the inequality is guaranteed analytically, so a violation
/// means a solver defect.
MassReport verify_theorem3(const FlowTrace& trace, const ExtensionSolution& sol,
                           const AsphericityResult& asph, const PrescribedScalar& rbar,
                           double H);

/// Rigidity diagnostics: when the ADM estimate sits within tol of the
/// boundary Hawking mass the scenario must be the model one (zero prescribed
/// curvature, round boundary, rotationally symmetric lapse matching the
/// closed form). Deviations are measured either way.
RigidityFlags verify_rigidity(const FlowTrace& trace, const ExtensionSolution& sol,
                              const PrescribedScalar& rbar, double tol);

}  // namespace hamflow
