#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "topomd/pipeline.hpp"

namespace topomd {

/// Interactive workflow shell: build a configuration, simulate, inspect,
/// revise parameters and extend runs, then compile the report. Commands:
///
///   set <param> <value>   change one spec parameter, keeping the rest
///   gen                   build the configuration and summarize it
///   run                   simulate + analyze, print a result summary
///   extend <steps>        continue the last run and re-analyze
///   show                  print the current spec
///   report                compile report.md from the last analysis
///   quit                  leave the shell
///
/// Unknown commands print help and the session continues.
class Shell {
public:
    Shell(std::istream& in, std::ostream& out);

    /// Run the command loop; returns a process exit code.
    int run(const std::string& initial_spec_path = "");

private:
    void print_help();
    void print_summary();
    bool handle(const std::string& line);  // false: quit
    void cmd_set(const std::string& key, const std::string& value);
    void cmd_gen();
    void cmd_run();
    void cmd_extend(long steps);
    void cmd_report();

    std::istream& in_;
    std::ostream& out_;
    PipelineSpec spec_;
    std::optional<SystemState> generated_;
    std::optional<Simulation> sim_;
    std::optional<ObservableSet> observables_;
};

} // namespace topomd
