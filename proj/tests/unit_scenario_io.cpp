#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "hamflow/io_util.hpp"
#include "hamflow/scenario.hpp"

using namespace hamflow;
namespace fs = std::filesystem;

namespace {

ScenarioConfig small_config(const std::string& id, const std::string& metric,
                            const std::string& rbar, double H) {
    ScenarioConfig c;
    c.id = id;
    c.metric_spec = metric;
    c.n = 48;
    c.t_end = 30.0;
    c.sample_dt = 0.01;
    c.rbar_spec = rbar;
    c.mean_curvature = H;
    c.t_max = 40.0;
    c.lapse_ds = 5e-4;
    return c;
}

fs::path temp_dir(const std::string& leaf) {
    fs::path p = fs::temp_directory_path() / "hamflow_test" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) { return read_text(p); }

}  // namespace

TEST_CASE("config round-trips through JSON unchanged") {
    ScenarioConfig c = small_config("rt", "ellipsoid(1,1,0.8)", "rotsym_power(0.05,4)", 1.8);
    const std::string once = c.to_json();
    const std::string twice = ScenarioConfig::from_json(once).to_json();
    CHECK(once == twice);

    BatteryConfig b;
    b.scenarios = {c, small_config("rt2", "round", "zero", 2.0)};
    const std::string bonce = b.to_json();
    CHECK(bonce == BatteryConfig::from_json(bonce).to_json());
}

TEST_CASE("config validation rejects malformed input") {
    CHECK_THROWS_AS((void)ScenarioConfig::from_json("{ not json"), Error);
    CHECK_THROWS_AS((void)ScenarioConfig::from_json("{}"), Error);
    ScenarioConfig c = small_config("x", "round", "zero", 2.0);
    c.n = 17;
    CHECK_THROWS_AS((void)ScenarioConfig::from_json(c.to_json()), Error);
    c = small_config("x", "round", "unknown_family(1)", 2.0);
    CHECK_THROWS_AS((void)ScenarioConfig::from_json(c.to_json()), Error);
    BatteryConfig empty;
    CHECK_THROWS_AS((void)BatteryConfig::from_json(empty.to_json()), Error);
}

TEST_CASE("prescribed scalar spec strings round-trip") {
    for (const char* s :
         {"zero", "rotsym_power(0.050000000000000003,4)", "separable(0.1,4;1,0.5)"}) {
        auto r = PrescribedScalar::parse(s);
        CHECK(PrescribedScalar::parse(r.spec_string()).spec_string() == r.spec_string());
    }
    CHECK_THROWS_AS((void)PrescribedScalar::parse("rotsym_power(-1,4)"), Error);
    CHECK_THROWS_AS((void)PrescribedScalar::parse("separable(0.1,4;-2)"), Error);
}

TEST_CASE("run_scenario: outputs on disk and deterministic reruns") {
    ScenarioConfig c = small_config("det", "ellipsoid(1,1,0.8)", "rotsym_power(0.05,4)", 1.8);
    const fs::path d1 = temp_dir("det1");
    const fs::path d2 = temp_dir("det2");
    for (const fs::path& d : {d1, d2}) {
        ScenarioResult res = run_scenario(c);
        write_trace_outputs(*res.trace, d);
        write_asphericity_outputs(res.asphericity, d);
        write_extension_outputs(res, d);
    }
    for (const char* f : {"trace.csv", "decay_fit.json", "partial_series.csv",
                          "asphericity.json", "leaf_masses.csv", "admissibility.json",
                          "mass_report.json"}) {
        CHECK(fs::exists(d1 / f));
        CHECK(slurp(d1 / f) == slurp(d2 / f));
    }
}

TEST_CASE("trace cache: scenarios sharing a metric reuse the trace bitwise") {
    TraceCache cache;
    ScenarioConfig a = small_config("a", "ellipsoid(1,1,0.8)", "zero", 1.9);
    ScenarioConfig b = small_config("b", "ellipsoid(1,1,0.8)", "rotsym_power(0.05,4)", 1.8);
    auto ta = cache.get(a);
    auto tb = cache.get(b);
    CHECK(ta.get() == tb.get());  // same object
    ScenarioConfig c = a;
    c.n = 64;
    CHECK(cache.get(c).get() != ta.get());
}

TEST_CASE("battery: summary rows, inequality verdicts, determinism") {
    BatteryConfig b;
    b.scenarios = {small_config("round_zero", "round", "zero", std::sqrt(2.0)),
                   small_config("round_power", "round", "rotsym_power(0.05,4)", 1.9),
                   small_config("ell_zero", "ellipsoid(1,1,0.8)", "zero", 1.9),
                   small_config("ell_sep", "ellipsoid(1,1,0.8)",
                                "separable(0.05,4;1,0.5)", 1.8)};
    const fs::path d1 = temp_dir("bat1");
    auto rows = run_battery(b, d1);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.report.inequality_ok);
        CHECK(r.report.per_time_bound_ok);
    }
    // rigidity triggers exactly on the model scenario
    CHECK(rows[0].report.rigidity.triggered);
    CHECK_FALSE(rows[1].report.rigidity.triggered);
    CHECK_FALSE(rows[2].report.rigidity.triggered);
    CHECK_FALSE(rows[3].report.rigidity.triggered);
    // the asphericity mass is intrinsic: both ellipsoid rows carry the same value
    CHECK(rows[2].report.m_as == rows[3].report.m_as);

    const fs::path d2 = temp_dir("bat2");
    (void)run_battery(b, d2);
    CHECK(slurp(d1 / "battery_summary.csv") == slurp(d2 / "battery_summary.csv"));
    for (const auto& r : rows)
        CHECK(slurp(d1 / r.id / "mass_report.json") == slurp(d2 / r.id / "mass_report.json"));
}

TEST_CASE("battery: a violated inequality is reported with the offending row") {
    // Doctored report path: run_battery throws only on a real violation, so
    // exercise the aggregation contract directly.
    std::vector<BatteryRow> rows(1);
    rows[0].id = "doctored";
    rows[0].report.inequality_ok = false;
    const std::string csv = battery_summary_csv(rows);
    CHECK(csv.find("doctored") != std::string::npos);
    CHECK(csv.find(",0,") != std::string::npos);
}

TEST_CASE("manifest serialization and config hashing") {
    RunManifest m;
    m.command = "extend";
    m.config_hash = fnv1a64_hex("{}");
    m.stages.push_back({"flow", 12, {"trace.csv"}});
    const std::string j = m.to_json();
    CHECK(j.find("\"command\": \"extend\"") != std::string::npos);
    CHECK(j.find("trace.csv") != std::string::npos);
    CHECK(fnv1a64_hex("abc") == fnv1a64_hex("abc"));
    CHECK(fnv1a64_hex("abc") != fnv1a64_hex("abd"));
}

TEST_CASE("format_g17 survives a parse round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 6.0221407599999999e23, -2.5e-14}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
}
