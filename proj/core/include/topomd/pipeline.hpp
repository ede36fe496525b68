#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topomd/analysis.hpp"
#include "topomd/engine.hpp"
#include "topomd/topogen.hpp"

namespace topomd {

/// Everything one batch run needs: configuration build, interactions,
/// thermostat, run length and output location. Parsed from a plain-text
/// spec file of `key = value` lines using exactly these key names.
struct PipelineSpec {
    GeneratorSpec gen;                 // architecture, sizes, B, n_s, seed
    InteractionParams interactions;
    ThermostatSpec thermostat;
    RunSpec run;                       // steps, dt, dump_every (seed mirrors gen.seed)
    std::string out_dir;

    // one optional list-valued parameter expands into a sweep
    std::string sweep_key;
    std::vector<double> sweep_values;

    bool is_sweep() const { return !sweep_key.empty(); }
    std::vector<std::string> validate() const;
};

/// Assign one key from its text form. Returns an error message, or an
/// empty string on success. Unknown keys are errors.
std::string set_pipeline_key(PipelineSpec& spec, const std::string& key,
                             const std::string& value);

/// Current text form of one key, for any key set_pipeline_key accepts.
std::string get_pipeline_key(const PipelineSpec& spec, const std::string& key);

/// Canonical key/value listing of a spec (for `show` and logs).
std::vector<std::pair<std::string, std::string>> describe(const PipelineSpec& spec);

struct ParsedPipeline {
    PipelineSpec spec;
    std::vector<std::string> errors;   // parse + unknown-key errors
};

ParsedPipeline parse_pipeline_file(const std::string& path);
ParsedPipeline parse_pipeline(std::istream& is);

struct PipelineOverrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
};

/// Exit codes shared by the pipeline and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

/// Full batch pipeline: generate, simulate, analyze, report, all under
/// spec.out_dir. Validation failures return kExitValidation with every
/// offending field listed on `log`; runtime failures keep partial outputs,
/// write a FAILED marker file and return kExitRuntime. Sweeps expand into
/// one subdirectory per value plus a combined summary report.
int run_pipeline(const PipelineSpec& spec, std::ostream& log);
int run_pipeline(const std::string& spec_path, const PipelineOverrides& overrides,
                 std::ostream& log);

/// Stage functions shared by the batch pipeline, the subcommands and the
/// interactive shell. All paths are derived from spec.out_dir.
SystemState stage_generate(const PipelineSpec& spec);
void write_config_outputs(const PipelineSpec& spec, const SystemState& state);
Simulation make_simulation(const PipelineSpec& spec, SystemState state);
void write_trajectory_output(const PipelineSpec& spec, const Trajectory& trajectory);
ObservableSet stage_analyze(const PipelineSpec& spec, const Trajectory& trajectory,
                            const Topology& topology);
void write_analysis_outputs(const PipelineSpec& spec, const ObservableSet& obs);
std::string stage_report(const PipelineSpec& spec, const SystemState& initial,
                         const ObservableSet& obs);

/// Output locations under spec.out_dir.
std::string data_path(const PipelineSpec& spec);
std::string topology_path(const PipelineSpec& spec);
std::string dump_path(const PipelineSpec& spec);
std::string report_path(const PipelineSpec& spec);

} // namespace topomd
