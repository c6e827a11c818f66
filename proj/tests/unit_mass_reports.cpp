#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hamflow/asphericity.hpp"
#include "hamflow/axisym_metric.hpp"
#include "hamflow/mass_report.hpp"
#include "hamflow/ricci_flow.hpp"

using namespace hamflow;

namespace {

const FlowTrace& round_trace() {
    static FlowTrace tr = run_flow(make_round(make_grid(64)));
    return tr;
}

const FlowTrace& ellipsoid_trace() {
    static FlowTrace tr = run_flow(make_ellipsoid(make_grid(64), 1, 1, 0.8));
    return tr;
}

MassReport full_report(const FlowTrace& tr, const PrescribedScalar& rbar, double H,
                       double t_max = 200.0) {
    LapseConfig lc;
    lc.t_max = t_max;
    auto sol = solve_lapse(tr, rbar, H, lc);
    auto asph = asphericity_limit(tr);
    return verify_theorem3(tr, sol, asph, rbar, H);
}

}  // namespace

TEST_CASE("hawking_mass_initial: constant mean curvature values") {
    auto g = make_grid(64);
    auto m = make_round(g);
    CHECK(hawking_mass_initial(m, 2.0) == doctest::Approx(0.0));
    CHECK(hawking_mass_initial(m, std::sqrt(2.0)) == doctest::Approx(0.25));
    CHECK(hawking_mass_initial(m, 0.0) == doctest::Approx(0.5));
    // field version agrees with the constant one
    ScalarField H = ScalarField::constant(g, std::sqrt(2.0));
    CHECK(hawking_mass_initial(m, H) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("e_term: zero family vanishes identically") {
    for (double t : {1.0, 5.0, 50.0})
        CHECK(e_term(ellipsoid_trace(), PrescribedScalar::zero(), t) == 0.0);
    auto [v, tail] = e_limit(ellipsoid_trace(), PrescribedScalar::zero());
    CHECK(v == 0.0);
    CHECK(tail == 0.0);
}

TEST_CASE("e_term: closed form on round data, e_t = (c/4)(1 - 1/t)") {
    auto rb = PrescribedScalar::rotsym_power(0.1, 4.0);
    for (double t : {2.0, 10.0, 100.0}) {
        const double expect = 0.025 * (1.0 - 1.0 / t);
        CHECK(std::abs(e_term(round_trace(), rb, t) - expect) < 1e-6);
    }
    auto [v, tail] = e_limit(round_trace(), rb);
    CHECK(std::abs(v - 0.025) < 1e-6);
    CHECK(tail > 0.0);
    // separable profile scales by sup psi = 3/2
    auto sep = PrescribedScalar::separable(0.1, 4.0, {1.0, 0.5});
    auto [vs, ts] = e_limit(round_trace(), sep);
    CHECK(std::abs(vs - 0.025 * 1.5) < 2e-6);
    (void)ts;
}

TEST_CASE("e_term: nonnegative and nondecreasing in t") {
    auto rb = PrescribedScalar::rotsym_power(0.05, 4.0);
    double prev = -1.0;
    for (double t : {1.0, 1.5, 2.0, 4.0, 8.0, 40.0, 150.0}) {
        const double v = e_term(ellipsoid_trace(), rb, t);
        CHECK(v >= 0.0);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
    CHECK_THROWS_AS((void)e_limit(ellipsoid_trace(), PrescribedScalar::rotsym_power(0.1, 2.5)),
                    Error);
}

TEST_CASE("verify_theorem3: Euclidean scenario is all zeros") {
    MassReport rep = full_report(round_trace(), PrescribedScalar::zero(), 2.0);
    CHECK(std::abs(rep.m_h_sigma) < 1e-12);
    CHECK(std::abs(rep.m_as) < 1e-12);
    CHECK(rep.e_value == 0.0);
    CHECK(std::abs(rep.adm_estimate) < 1e-8);
    CHECK(std::abs(rep.inequality_slack) < 1e-8);
    CHECK(rep.inequality_ok);
    CHECK(rep.per_time_bound_ok);
    CHECK(rep.rigidity.triggered);
    CHECK(rep.rigidity.all_pass());
}

TEST_CASE("verify_theorem3: Schwarzschild equality and rigidity") {
    MassReport rep = full_report(round_trace(), PrescribedScalar::zero(), std::sqrt(2.0));
    CHECK(rep.m_h_sigma == doctest::Approx(0.25));
    CHECK(std::abs(rep.m_as) < 1e-10);
    CHECK(std::abs(rep.adm_estimate - 0.25) < 1e-4);
    CHECK(std::abs(rep.inequality_slack) < 1e-4);
    CHECK(std::abs(rep.rigidity_gap) < 1e-4);
    CHECK(rep.inequality_ok);
    CHECK(rep.per_time_bound_ok);
    CHECK(rep.rigidity.triggered);
    CHECK(rep.rigidity.r_is_zero);
    CHECK(rep.rigidity.metric_is_round);
    CHECK(rep.rigidity.u_is_rotsym);
    CHECK(rep.rigidity.u_matches_model);
}

TEST_CASE("verify_theorem3: ellipsoid with prescribed curvature has positive slack terms") {
    auto rb = PrescribedScalar::rotsym_power(0.05, 4.0);
    MassReport rep = full_report(ellipsoid_trace(), rb, 1.8);
    CHECK(rep.m_as > 1e-3);   // genuinely aspherical
    CHECK(rep.e_value > 1e-3);
    CHECK(rep.inequality_ok);
    CHECK(rep.per_time_bound_ok);
    CHECK(rep.inequality_slack >= -rep.tolerance_budget);
    // far from the rigid case
    CHECK(rep.rigidity_gap > 1e-3);
    CHECK_FALSE(rep.rigidity.triggered);
    CHECK_FALSE(rep.rigidity.metric_is_round);
}

TEST_CASE("verify_rigidity: ellipsoid scenario does not trigger") {
    LapseConfig lc;
    lc.t_max = 200.0;
    auto sol = solve_lapse(ellipsoid_trace(), PrescribedScalar::zero(), 1.9, lc);
    RigidityFlags fl = verify_rigidity(ellipsoid_trace(), sol, PrescribedScalar::zero(), 1e-4);
    CHECK_FALSE(fl.triggered);  // adm exceeds m_H by the accumulated growth
    CHECK(fl.dev_round > 1e-4);
    CHECK(fl.dev_rotsym > 0.0);
}

TEST_CASE("e vanishes exactly when the family is zero, across a mini battery") {
    struct Case {
        const FlowTrace& tr;
        PrescribedScalar rb;
    };
    const Case cases[] = {
        {round_trace(), PrescribedScalar::zero()},
        {round_trace(), PrescribedScalar::rotsym_power(0.05, 4.0)},
        {ellipsoid_trace(), PrescribedScalar::zero()},
        {ellipsoid_trace(), PrescribedScalar::separable(0.05, 4.0, {1.0, 0.5})},
    };
    for (const auto& c : cases) {
        const auto [v, tail] = e_limit(c.tr, c.rb);
        (void)tail;
        if (c.rb.is_zero())
            CHECK(v < 1e-10);
        else
            CHECK(v > 1e-10);
    }
}
