#pragma once

#include <string>
#include <utility>
#include <vector>

#include "topomd/analysis.hpp"

namespace topomd {

/// Narrative and parameter blocks of one simulation report.
struct ReportContext {
    std::string title;
    std::string narrative;
    std::vector<std::pair<std::string, std::string>> configuration;
    std::vector<std::pair<std::string, std::string>> parameters;
};

/// Compile the markdown report: Context, System Configuration, Simulation
/// Parameters, a Results table (inapplicable observables shown as an em
/// dash) and embedded links to every plot. Plot paths are given relative
/// to the report location and must exist. Output is deterministic.
void write_report(const ReportContext& context, const ObservableSet& observables,
                  const std::vector<std::pair<std::string, std::string>>& plots,
                  const std::string& out_path);

/// The report body as a string (what write_report persists).
std::string render_report(const ReportContext& context,
                          const ObservableSet& observables,
                          const std::vector<std::pair<std::string, std::string>>& plots);

} // namespace topomd
