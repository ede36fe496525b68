#include "topomd/shell.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace topomd {

Shell::Shell(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

int Shell::run(const std::string& initial_spec_path) {
    if (!initial_spec_path.empty()) {
        ParsedPipeline parsed = parse_pipeline_file(initial_spec_path);
        if (!parsed.errors.empty()) {
            out_ << "spec file errors:\n";
            for (const auto& m : parsed.errors) out_ << "  - " << m << '\n';
            return kExitValidation;
        }
        spec_ = parsed.spec;
        out_ << "loaded spec from " << initial_spec_path << '\n';
    }
    out_ << "interactive session; defaults: dt = " << spec_.run.dt
         << ", T = " << spec_.thermostat.T << ", gamma = " << spec_.thermostat.gamma
         << ", thermostat = " << to_string(spec_.thermostat.kind) << '\n';
    out_ << "type 'help' for commands\n";

    std::string line;
    while (out_ << "> " << std::flush, std::getline(in_, line)) {
        if (!handle(line)) return kExitOk;
    }
    return kExitOk;
}

void Shell::print_help() {
    out_ << "commands:\n"
         << "  set <param> <value>   change one parameter (others kept)\n"
         << "  gen                   build the configuration\n"
         << "  run                   simulate and analyze\n"
         << "  extend <steps>        continue the last run\n"
         << "  show                  print the current spec\n"
         << "  report                write report.md\n"
         << "  quit                  exit\n";
}

bool Shell::handle(const std::string& line) {
    std::istringstream ls(line);
    std::string cmd;
    if (!(ls >> cmd)) return true;

    try {
        if (cmd == "quit" || cmd == "exit") return false;
        if (cmd == "help") {
            print_help();
        } else if (cmd == "set") {
            std::string key;
            std::string value;
            ls >> key;
            std::getline(ls, value);
            if (key.empty() || value.find_first_not_of(" \t") == std::string::npos) {
                out_ << "usage: set <param> <value>\n";
            } else {
                cmd_set(key, value.substr(value.find_first_not_of(" \t")));
            }
        } else if (cmd == "gen") {
            cmd_gen();
        } else if (cmd == "run") {
            cmd_run();
        } else if (cmd == "extend") {
            long steps = -1;
            if (!(ls >> steps) || steps < 0) {
                out_ << "usage: extend <steps>\n";
            } else {
                cmd_extend(steps);
            }
        } else if (cmd == "show") {
            for (const auto& [k, v] : describe(spec_)) out_ << "  " << k << " = " << v << '\n';
        } else if (cmd == "report") {
            cmd_report();
        } else {
            out_ << "unknown command '" << cmd << "'\n";
            print_help();
        }
    } catch (const std::exception& e) {
        out_ << "error: " << e.what() << '\n';
    }
    return true;
}

void Shell::cmd_set(const std::string& key, const std::string& value) {
    const std::string before = get_pipeline_key(spec_, key);
    const std::string err = set_pipeline_key(spec_, key, value);
    if (!err.empty()) {
        out_ << "set failed: " << err << '\n';
        return;
    }
    out_ << key << ": " << before << " -> " << get_pipeline_key(spec_, key) << '\n';
    if (generated_) out_ << "note: configuration is stale; 'gen' to rebuild\n";
}

void Shell::cmd_gen() {
    auto bad = spec_.gen.validate();
    if (spec_.out_dir.empty()) bad.push_back("out directory required (set out <dir>)");
    if (!bad.empty()) {
        out_ << "cannot generate:\n";
        for (const auto& m : bad) out_ << "  - " << m << '\n';
        return;
    }
    generated_ = stage_generate(spec_);
    write_config_outputs(spec_, *generated_);
    sim_.reset();
    observables_.reset();
    out_ << "generated " << to_string(spec_.gen.architecture) << " system: "
         << generated_->polymer_count() << " polymer beads, "
         << generated_->solvent_count() << " solvent beads, "
         << generated_->bonds.size() << " bonds\n"
         << "wrote " << data_path(spec_) << " and " << topology_path(spec_) << '\n';
}

void Shell::print_summary() {
    const auto& obs = *observables_;
    out_ << "  mean Rg^2 = " << obs.rg2_mean << '\n';
    if (obs.ree_mean) out_ << "  mean R_ee = " << *obs.ree_mean << '\n';
    if (obs.lp) {
        if (obs.lp->infinite)
            out_ << "  l_p = inf (no measurable decay)\n";
        else
            out_ << "  l_p = " << obs.lp->lp << '\n';
    }
    out_ << "  D = " << obs.msd.diffusion << '\n';
}

void Shell::cmd_run() {
    if (!generated_) {
        out_ << "no configuration yet; run 'gen' first\n";
        return;
    }
    const auto bad = spec_.validate();
    if (!bad.empty()) {
        out_ << "cannot run:\n";
        for (const auto& m : bad) out_ << "  - " << m << '\n';
        return;
    }
    sim_ = make_simulation(spec_, *generated_);
    sim_->run(spec_.run.steps, spec_.run.dump_every);
    write_trajectory_output(spec_, sim_->trajectory());
    observables_ = stage_analyze(spec_, sim_->trajectory(), generated_->topology);
    write_analysis_outputs(spec_, *observables_);
    out_ << "ran " << spec_.run.steps << " steps under "
         << to_string(spec_.thermostat.kind) << " thermostat; trajectory ends at step "
         << sim_->state().step << '\n';
    print_summary();
}

void Shell::cmd_extend(long steps) {
    if (!sim_) {
        out_ << "nothing to extend; run 'run' first\n";
        return;
    }
    sim_->extend(steps);
    write_trajectory_output(spec_, sim_->trajectory());
    observables_ = stage_analyze(spec_, sim_->trajectory(), generated_->topology);
    write_analysis_outputs(spec_, *observables_);
    out_ << "extended by " << steps << " steps; trajectory ends at step "
         << sim_->state().step << '\n';
    print_summary();
}

void Shell::cmd_report() {
    if (!observables_ || !generated_) {
        out_ << "no analysis results yet; run 'run' first\n";
        return;
    }
    const std::string path = stage_report(spec_, *generated_, *observables_);
    out_ << "wrote " << path << '\n';
}

} // namespace topomd
