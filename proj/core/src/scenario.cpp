#include "hamflow/scenario.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hamflow/io_util.hpp"

namespace hamflow {

using ordered_json = nlohmann::ordered_json;

FlowConfig ScenarioConfig::flow_config() const {
    FlowConfig fc;
    fc.t_end = t_end;
    fc.sample_dt = sample_dt;
    fc.truncation_threshold = truncation_threshold;
    fc.cfl = cfl;
    return fc;
}

LapseConfig ScenarioConfig::lapse_config() const {
    LapseConfig lc;
    lc.t_max = t_max;
    lc.alpha = alpha;
    lc.ds = lapse_ds;
    return lc;
}

namespace {

ordered_json config_to_json_obj(const ScenarioConfig& c) {
    ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["id"] = c.id;
    j["metric"] = c.metric_spec;
    j["n"] = c.n;
    j["flow"] = {{"t_end", c.t_end},
                 {"sample_dt", c.sample_dt},
                 {"truncation_threshold", c.truncation_threshold},
                 {"cfl", c.cfl}};
    j["extension"] = {{"scalar_curvature", c.rbar_spec},
                      {"mean_curvature", c.mean_curvature},
                      {"t_max", c.t_max},
                      {"alpha", c.alpha},
                      {"lapse_ds", c.lapse_ds}};
    j["output_dir"] = c.output_dir;
    return j;
}

ScenarioConfig config_from_json_obj(const ordered_json& j) {
    ScenarioConfig c;
    try {
        if (j.at("schema_version").get<int>() != kConfigSchemaVersion)
            throw_error(ErrorKind::config, "unsupported config schema version");
        c.id = j.at("id").get<std::string>();
        c.metric_spec = j.at("metric").get<std::string>();
        c.n = j.at("n").get<int>();
        const auto& f = j.at("flow");
        c.t_end = f.at("t_end").get<double>();
        c.sample_dt = f.at("sample_dt").get<double>();
        c.truncation_threshold = f.at("truncation_threshold").get<double>();
        c.cfl = f.value("cfl", 0.2);
        const auto& e = j.at("extension");
        c.rbar_spec = e.at("scalar_curvature").get<std::string>();
        c.mean_curvature = e.at("mean_curvature").get<double>();
        c.t_max = e.at("t_max").get<double>();
        c.alpha = e.value("alpha", 0.5);
        c.lapse_ds = e.value("lapse_ds", 1e-4);
        c.output_dir = j.value("output_dir", std::string("out"));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        throw_error(ErrorKind::config, std::string("bad scenario config: ") + ex.what());
    }
    if (c.n < 16 || c.n % 2 != 0)
        throw_error(ErrorKind::config, "config: n must be even and >= 16");
    if (!(c.t_end > 1.0) || !(c.sample_dt > 0.0) || !(c.truncation_threshold >= 0.0))
        throw_error(ErrorKind::config, "config: bad flow parameters");
    if (!(c.mean_curvature > 0.0) || !(c.t_max >= 10.0) || !(c.alpha > 0.0) ||
        !(c.alpha < 1.0) || !(c.lapse_ds > 0.0))
        throw_error(ErrorKind::config, "config: bad extension parameters");
    // Fail early on malformed family specs.
    (void)PrescribedScalar::parse(c.rbar_spec);
    return c;
}

}  // namespace

std::string ScenarioConfig::to_json() const { return config_to_json_obj(*this).dump(2) + "\n"; }

ScenarioConfig ScenarioConfig::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& ex) {
        throw_error(ErrorKind::config, std::string("config parse error: ") + ex.what());
    }
    return config_from_json_obj(j);
}

std::string BatteryConfig::to_json() const {
    ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["output_dir"] = output_dir;
    j["scenarios"] = ordered_json::array();
    for (const auto& s : scenarios) j["scenarios"].push_back(config_to_json_obj(s));
    return j.dump(2) + "\n";
}

BatteryConfig BatteryConfig::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& ex) {
        throw_error(ErrorKind::config, std::string("config parse error: ") + ex.what());
    }
    BatteryConfig b;
    try {
        if (j.at("schema_version").get<int>() != kConfigSchemaVersion)
            throw_error(ErrorKind::config, "unsupported config schema version");
        b.output_dir = j.value("output_dir", std::string("out"));
        for (const auto& s : j.at("scenarios")) b.scenarios.push_back(config_from_json_obj(s));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        throw_error(ErrorKind::config, std::string("bad battery config: ") + ex.what());
    }
    if (b.scenarios.empty())
        throw_error(ErrorKind::config, "battery config contains no scenarios");
    return b;
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["stages"] = ordered_json::array();
    for (const auto& s : stages) {
        ordered_json st;
        st["name"] = s.name;
        st["wall_ms"] = s.wall_ms;
        st["outputs"] = s.outputs;
        j["stages"].push_back(st);
    }
    return j.dump(2) + "\n";
}

namespace {

std::string trace_cache_key(const ScenarioConfig& c) {
    std::ostringstream key;
    key << c.metric_spec << '|' << c.n << '|' << format_g17(c.t_end) << '|'
        << format_g17(c.sample_dt) << '|' << format_g17(c.truncation_threshold) << '|'
        << format_g17(c.cfl);
    return key.str();
}

}  // namespace

std::shared_ptr<const FlowTrace> compute_trace(const ScenarioConfig& cfg) {
    const GridPtr grid = make_grid(cfg.n);
    const AxisymMetric m0 = parse_metric_spec(cfg.metric_spec, grid);
    return std::make_shared<const FlowTrace>(run_flow(m0, cfg.flow_config()));
}

std::shared_ptr<const FlowTrace> TraceCache::get(const ScenarioConfig& cfg) {
    const std::string key = trace_cache_key(cfg);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto trace = compute_trace(cfg);
    cache_.emplace(key, trace);
    return trace;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, TraceCache* cache) {
    ScenarioResult res;
    res.trace = cache ? cache->get(cfg) : compute_trace(cfg);
    res.asphericity = asphericity_limit(*res.trace);
    const PrescribedScalar rbar = PrescribedScalar::parse(cfg.rbar_spec);
    res.admissibility =
        check_admissibility(*res.trace, rbar, cfg.mean_curvature, cfg.alpha);
    if (!res.admissibility.admissible())
        throw_error(ErrorKind::inadmissible,
                    "scenario '" + cfg.id + "' inadmissible: H=" +
                        format_g17(cfg.mean_curvature) + " but 2*sqrt(C0)=" +
                        format_g17(res.admissibility.h_threshold));
    res.solution = solve_lapse(*res.trace, rbar, cfg.mean_curvature, cfg.lapse_config());
    res.report =
        verify_theorem3(*res.trace, res.solution, res.asphericity, rbar, cfg.mean_curvature);
    return res;
}

void write_trace_outputs(const FlowTrace& trace, const std::filesystem::path& dir) {
    ensure_dir(dir);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(trace.times.size());
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        rows.push_back({format_g17(trace.times[i]), format_g17(trace.k_star[i]),
                        format_g17(trace.m_sup_sq[i]), format_g17(trace.area_err[i])});
    write_csv(dir / "trace.csv", "t,K_star,M_sup_sq,area_error", rows);

    ordered_json j;
    auto fit_json = [](const ExpFit& f) {
        ordered_json o;
        o["ok"] = f.ok;
        o["all_zero"] = f.all_zero;
        o["rate"] = f.rate;
        o["amplitude"] = f.amplitude;
        o["log_rms"] = f.log_rms;
        o["log_rms_rel"] = f.log_rms_rel;
        o["points"] = f.points;
        o["window"] = {f.window_lo, f.window_hi};
        return o;
    };
    j["schema_version"] = kConfigSchemaVersion;
    j["truncated"] = trace.truncated;
    j["truncation_time"] = trace.truncation_time;
    j["threshold"] = trace.threshold;
    j["m_sup_sq_fit"] = fit_json(trace.msq_fit);
    j["curvature_deficit_fit"] = fit_json(trace.deficit_fit);
    write_text(dir / "decay_fit.json", j.dump(2) + "\n");
}

void write_asphericity_outputs(const AsphericityResult& res, const std::filesystem::path& dir) {
    ensure_dir(dir);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(res.partial_series.size());
    for (const auto& [t, v] : res.partial_series)
        rows.push_back({format_g17(t), format_g17(v)});
    write_csv(dir / "partial_series.csv", "t,m_aS_partial", rows);

    ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["limit"] = res.limit;
    j["tail_bound"] = res.tail_bound;
    j["truncation_time"] = res.truncation_time;
    j["partial_series_csv_path"] = "partial_series.csv";
    write_text(dir / "asphericity.json", j.dump(2) + "\n");
}

std::string admissibility_json(const AdmissibilityReport& rep) {
    ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["integral_decay_ok"] = rep.integral_decay_ok;
    if (std::isfinite(rep.integral_decay_value))
        j["integral_decay_value"] = rep.integral_decay_value;
    else
        j["integral_decay_value"] = nullptr;
    j["holder_decay_ok"] = rep.holder_decay_ok;
    j["holder_constant"] = rep.holder_constant;
    if (std::isfinite(rep.c0))
        j["c0"] = rep.c0;
    else
        j["c0"] = nullptr;
    j["h_threshold"] = std::isfinite(rep.h_threshold) ? ordered_json(rep.h_threshold)
                                                      : ordered_json(nullptr);
    j["mean_curvature"] = rep.mean_curvature;
    j["mean_curvature_positive"] = rep.mean_curvature_positive;
    j["alpha"] = rep.alpha;
    j["admissible"] = rep.admissible();
    return j.dump(2) + "\n";
}

std::string mass_report_json(const MassReport& rep) {
    ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["m_h_sigma"] = rep.m_h_sigma;
    j["m_as"] = {{"value", rep.m_as}, {"tail_bound", rep.m_as_tail}};
    j["e_term"] = {{"value", rep.e_value}, {"tail_bound", rep.e_tail}};
    j["adm"] = {{"estimate", rep.adm_estimate}, {"tail_bound", rep.adm_tail}};
    j["inequality_slack"] = rep.inequality_slack;
    j["rigidity_gap"] = rep.rigidity_gap;
    j["tolerance_budget"] = rep.tolerance_budget;
    j["inequality_ok"] = rep.inequality_ok;
    j["per_time_bound_ok"] = rep.per_time_bound_ok;
    j["per_time_worst_violation"] = rep.per_time_worst_violation;
    j["rigidity"] = {{"triggered", rep.rigidity.triggered},
                     {"r_is_zero", rep.rigidity.r_is_zero},
                     {"metric_is_round", rep.rigidity.metric_is_round},
                     {"u_is_rotsym", rep.rigidity.u_is_rotsym},
                     {"u_matches_model", rep.rigidity.u_matches_model},
                     {"dev_round", rep.rigidity.dev_round},
                     {"dev_rotsym", rep.rigidity.dev_rotsym},
                     {"dev_model", rep.rigidity.dev_model}};
    // The boundary data is taken abstractly; whether it bounds a compact
    // region of nonnegative scalar curvature is not checkable here.
    j["unchecked_hypothesis"] =
        "boundary data assumed to bound a compact region of nonnegative scalar curvature";
    return j.dump(2) + "\n";
}

void write_extension_outputs(const ScenarioResult& res, const std::filesystem::path& dir) {
    ensure_dir(dir);
    const ExtensionSolution& sol = res.solution;
    std::vector<std::vector<std::string>> rows;
    rows.reserve(sol.times.size());
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        rows.push_back({format_g17(sol.times[i]), format_g17(sol.leaf_hawking[i]),
                        format_g17(sol.min_u[i]), format_g17(sol.max_u[i]),
                        format_g17(sol.min_leaf_h[i])});
    write_csv(dir / "leaf_masses.csv", "t,m_H,min_u,max_u,min_leaf_H", rows);
    write_text(dir / "admissibility.json", admissibility_json(res.admissibility));
    write_text(dir / "mass_report.json", mass_report_json(res.report));
}

std::string battery_summary_csv(const std::vector<BatteryRow>& rows) {
    std::ostringstream out;
    out << "id,metric,scalar_curvature,H,m_h_sigma,m_as,m_as_tail,e,e_tail,"
           "adm_estimate,adm_tail,slack,rigidity_gap,inequality_ok,rigid,"
           "r_is_zero,metric_is_round,u_is_rotsym,u_matches_model\n";
    for (const auto& r : rows) {
        const MassReport& m = r.report;
        out << r.id << ',' << r.cfg.metric_spec << ',' << r.cfg.rbar_spec << ','
            << format_g17(r.cfg.mean_curvature) << ',' << format_g17(m.m_h_sigma) << ','
            << format_g17(m.m_as) << ',' << format_g17(m.m_as_tail) << ','
            << format_g17(m.e_value) << ',' << format_g17(m.e_tail) << ','
            << format_g17(m.adm_estimate) << ',' << format_g17(m.adm_tail) << ','
            << format_g17(m.inequality_slack) << ',' << format_g17(m.rigidity_gap) << ','
            << (m.inequality_ok ? 1 : 0) << ',' << (m.rigidity.triggered ? 1 : 0) << ','
            << (m.rigidity.r_is_zero ? 1 : 0) << ',' << (m.rigidity.metric_is_round ? 1 : 0)
            << ',' << (m.rigidity.u_is_rotsym ? 1 : 0) << ','
            << (m.rigidity.u_matches_model ? 1 : 0) << '\n';
    }
    return out.str();
}

std::vector<BatteryRow> run_battery(const BatteryConfig& cfg,
                                    const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);

    // Share traces across scenarios with the same intrinsic data. Traces are
    // computed up front (sequentially, so the cache needs no locking); the
    // extension stages then run concurrently.
    TraceCache cache;
    std::vector<std::shared_ptr<const FlowTrace>> traces;
    traces.reserve(cfg.scenarios.size());
    for (const auto& sc : cfg.scenarios) traces.push_back(cache.get(sc));

    std::vector<std::future<ScenarioResult>> futs;
    futs.reserve(cfg.scenarios.size());
    for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
        futs.push_back(std::async(std::launch::async, [&, i]() {
            ScenarioResult res;
            res.trace = traces[i];
            res.asphericity = asphericity_limit(*res.trace);
            const ScenarioConfig& sc = cfg.scenarios[i];
            const PrescribedScalar rbar = PrescribedScalar::parse(sc.rbar_spec);
            res.admissibility =
                check_admissibility(*res.trace, rbar, sc.mean_curvature, sc.alpha);
            if (!res.admissibility.admissible())
                throw_error(ErrorKind::inadmissible,
                            "scenario '" + sc.id + "' inadmissible");
            res.solution =
                solve_lapse(*res.trace, rbar, sc.mean_curvature, sc.lapse_config());
            res.report = verify_theorem3(*res.trace, res.solution, res.asphericity, rbar,
                                         sc.mean_curvature);
            return res;
        }));
    }

    std::vector<BatteryRow> rows;
    rows.reserve(cfg.scenarios.size());
    std::string violations;
    for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
        ScenarioResult res = futs[i].get();
        const ScenarioConfig& sc = cfg.scenarios[i];
        const std::filesystem::path sdir = out_dir / sc.id;
        write_trace_outputs(*res.trace, sdir);
        write_asphericity_outputs(res.asphericity, sdir);
        write_extension_outputs(res, sdir);
        if (!res.report.inequality_ok || !res.report.per_time_bound_ok)
            violations += (violations.empty() ? "" : ", ") + sc.id;
        rows.push_back({sc.id, sc, res.report});
    }
    write_text(out_dir / "battery_summary.csv", battery_summary_csv(rows));
    if (!violations.empty())
        throw_error(ErrorKind::inequality_violation,
                    "mass inequality violated in scenarios: " + violations);
    return rows;
}

}  // namespace hamflow
