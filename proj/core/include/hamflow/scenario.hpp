#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hamflow/asphericity.hpp"
#include "hamflow/extension.hpp"
#include "hamflow/mass_report.hpp"
#include "hamflow/prescribed_scalar.hpp"
#include "hamflow/ricci_flow.hpp"

namespace hamflow {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// One fully deterministic pipeline configuration. Serialized as JSON with a
/// schema version; round-trips unchanged.
struct ScenarioConfig {
    std::string id = "scenario";
    std::string metric_spec = "round";
    int n = 256;
    // flow stage
    double t_end = 40.0;
    double sample_dt = 0.005;
    double truncation_threshold = 1e-14;
    double cfl = 0.2;
    // extension stage
    std::string rbar_spec = "zero";
    double mean_curvature = 2.0;
    double t_max = 200.0;
    double alpha = 0.5;
    double lapse_ds = 1e-4;
    std::string output_dir = "out";

    FlowConfig flow_config() const;
    LapseConfig lapse_config() const;

    std::string to_json() const;
    static ScenarioConfig from_json(const std::string& text);
};

struct BatteryConfig {
    std::vector<ScenarioConfig> scenarios;
    std::string output_dir = "out";

    std::string to_json() const;
    static BatteryConfig from_json(const std::string& text);
};

struct StageRecord {
    std::string name;
    long long wall_ms = 0;
    std::vector<std::string> outputs;
};

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string tool_version = kToolVersion;
    std::vector<StageRecord> stages;

    std::string to_json() const;
};

/// Full in-memory result of one scenario.
struct ScenarioResult {
    std::shared_ptr<const FlowTrace> trace;
    AsphericityResult asphericity;
    AdmissibilityReport admissibility;
    ExtensionSolution solution;
    MassReport report;
};

/// Shares flow traces between scenarios with identical metric/flow
/// parameters; the asphericity mass depends only on the intrinsic metric, so
/// scenarios differing in (Rbar, H) reuse the trace bit-for-bit.
class TraceCache {
  public:
    std::shared_ptr<const FlowTrace> get(const ScenarioConfig& cfg);

  private:
    std::map<std::string, std::shared_ptr<const FlowTrace>> cache_;
};

std::shared_ptr<const FlowTrace> compute_trace(const ScenarioConfig& cfg);
ScenarioResult run_scenario(const ScenarioConfig& cfg, TraceCache* cache = nullptr);

/// Output writers (deterministic files; see README for the schemas).
void write_trace_outputs(const FlowTrace& trace, const std::filesystem::path& dir);
void write_asphericity_outputs(const AsphericityResult& res, const std::filesystem::path& dir);
void write_extension_outputs(const ScenarioResult& res, const std::filesystem::path& dir);
std::string mass_report_json(const MassReport& rep);
std::string admissibility_json(const AdmissibilityReport& rep);

struct BatteryRow {
    std::string id;
    ScenarioConfig cfg;
    MassReport report;
};

/// Runs every scenario (concurrently; results ordered by index), writes the
/// per-scenario outputs plus a summary CSV, and reports inequality
/// violations; throws inequality_violation listing offending rows.
std::vector<BatteryRow> run_battery(const BatteryConfig& cfg,
                                    const std::filesystem::path& out_dir);

std::string battery_summary_csv(const std::vector<BatteryRow>& rows);

}  // namespace hamflow
