#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "topomd/lammps_io.hpp"
#include "topomd/pipeline.hpp"
#include "topomd/shell.hpp"

using namespace topomd;

namespace {

struct CommonArgs {
    std::string spec_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("spec", args.spec_path, "pipeline spec file")->required();
    cmd->add_option("--out", [&args](const std::vector<std::string>& v) {
        args.out_dir = v.front();
        return true;
    }, "output directory (overrides the spec's 'out')");
    cmd->add_option("--seed", [&args](const std::vector<std::string>& v) {
        args.seed = std::stoull(v.front());
        return true;
    }, "random seed (overrides the spec's 'seed')");
}

/// Load + validate a spec, folding in CLI overrides. Returns nullopt after
/// printing every offending field.
std::optional<PipelineSpec> load_spec(const CommonArgs& args, bool check_sweep_free,
                                      const char* what) {
    ParsedPipeline parsed = parse_pipeline_file(args.spec_path);
    if (args.out_dir) parsed.spec.out_dir = *args.out_dir;
    if (args.seed) {
        parsed.spec.gen.seed = *args.seed;
        parsed.spec.run.seed = *args.seed;
    }
    auto errors = parsed.errors;
    for (const auto& m : parsed.spec.validate()) errors.push_back(m);
    if (check_sweep_free && parsed.spec.is_sweep())
        errors.push_back(std::string(what) + " does not support sweep specs; use 'run'");
    if (!errors.empty()) {
        std::cerr << "invalid spec:\n";
        for (const auto& m : errors) std::cerr << "  - " << m << '\n';
        return std::nullopt;
    }
    return parsed.spec;
}

int cmd_generate(const CommonArgs& args) {
    const auto spec = load_spec(args, true, "generate");
    if (!spec) return kExitValidation;
    try {
        const SystemState state = stage_generate(*spec);
        write_config_outputs(*spec, state);
        std::cout << "generated " << to_string(spec->gen.architecture) << " system: "
                  << state.polymer_count() << " polymer beads, " << state.solvent_count()
                  << " solvent beads, " << state.bonds.size() << " bonds\n"
                  << "wrote " << data_path(*spec) << ", " << topology_path(*spec) << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_simulate(const CommonArgs& args) {
    const auto spec = load_spec(args, true, "simulate");
    if (!spec) return kExitValidation;
    try {
        SystemState state = read_lammps_data(data_path(*spec));
        state.topology = read_topology(topology_path(*spec));
        Simulation sim = make_simulation(*spec, std::move(state));
        sim.run(spec->run.steps, spec->run.dump_every);
        write_trajectory_output(*spec, sim.trajectory());
        std::cout << "ran " << spec->run.steps << " steps under "
                  << to_string(spec->thermostat.kind) << " thermostat\nwrote "
                  << dump_path(*spec) << " (" << sim.trajectory().frames.size()
                  << " frames)\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_analyze(const CommonArgs& args) {
    const auto spec = load_spec(args, true, "analyze");
    if (!spec) return kExitValidation;
    try {
        const Trajectory traj = read_dump(dump_path(*spec));
        const Topology topo = read_topology(topology_path(*spec));
        const ObservableSet obs = stage_analyze(*spec, traj, topo);
        write_analysis_outputs(*spec, obs);
        std::cout << "mean Rg^2 = " << obs.rg2_mean << '\n';
        if (obs.ree_mean) std::cout << "mean R_ee = " << *obs.ree_mean << '\n';
        if (obs.lp && !obs.lp->infinite) std::cout << "l_p = " << obs.lp->lp << '\n';
        std::cout << "D = " << obs.msd.diffusion << '\n';
        std::cout << "wrote plots and analysis tables under " << spec->out_dir << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_report(const CommonArgs& args) {
    const auto spec = load_spec(args, true, "report");
    if (!spec) return kExitValidation;
    try {
        SystemState initial = read_lammps_data(data_path(*spec));
        initial.topology = read_topology(topology_path(*spec));
        const Trajectory traj = read_dump(dump_path(*spec));
        const ObservableSet obs = stage_analyze(*spec, traj, initial.topology);
        write_analysis_outputs(*spec, obs);
        std::cout << "wrote " << stage_report(*spec, initial, obs) << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarse-grained molecular dynamics of topological polymers"};
    app.require_subcommand(1);

    CommonArgs gen_args;
    CommonArgs sim_args;
    CommonArgs ana_args;
    CommonArgs rep_args;
    CommonArgs run_args;
    std::string shell_spec;

    add_common(app.add_subcommand("generate", "build the initial configuration"),
               gen_args);
    add_common(app.add_subcommand("simulate",
                                  "integrate an existing configuration to a dump file"),
               sim_args);
    add_common(app.add_subcommand("analyze", "conformation analysis of a dump file"),
               ana_args);
    add_common(app.add_subcommand("report", "compile the markdown report"), rep_args);
    add_common(app.add_subcommand(
                   "run", "full pipeline: generate, simulate, analyze, report"),
               run_args);
    app.add_subcommand("shell", "interactive workflow session")
        ->add_option("spec", shell_spec, "optional initial spec file");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("generate")) return cmd_generate(gen_args);
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_args);
    if (app.got_subcommand("analyze")) return cmd_analyze(ana_args);
    if (app.got_subcommand("report")) return cmd_report(rep_args);
    if (app.got_subcommand("run")) {
        PipelineOverrides overrides;
        overrides.out_dir = run_args.out_dir;
        overrides.seed = run_args.seed;
        return run_pipeline(run_args.spec_path, overrides, std::cout);
    }
    Shell shell(std::cin, std::cout);
    return shell.run(shell_spec);
}
