#include "topomd/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topomd/error.hpp"

namespace topomd {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string render_report(const ReportContext& context,
                          const ObservableSet& observables,
                          const std::vector<std::pair<std::string, std::string>>& plots) {
    std::ostringstream os;
    os << "# " << context.title << "\n\n";
    os << "## Context\n\n" << context.narrative << "\n\n";

    os << "## System Configuration\n\n";
    os << "| Parameter | Value |\n|---|---|\n";
    for (const auto& [k, v] : context.configuration) os << "| " << k << " | " << v << " |\n";
    os << '\n';

    os << "## Simulation Parameters\n\n";
    os << "| Parameter | Value |\n|---|---|\n";
    for (const auto& [k, v] : context.parameters) os << "| " << k << " | " << v << " |\n";
    os << '\n';

    os << "## Results\n\n";
    os << "| Observable | Value |\n|---|---|\n";
    os << "| mean Rg^2 | " << fmt(observables.rg2_mean) << " |\n";
    os << "| mean R_ee | "
       << (observables.ree_mean ? fmt(*observables.ree_mean) : std::string("—"))
       << " |\n";
    std::string lp = "—";
    if (observables.lp)
        lp = observables.lp->infinite ? std::string("inf") : fmt(observables.lp->lp);
    os << "| l_p | " << lp << " |\n";
    os << "| D | " << fmt(observables.msd.diffusion) << " |\n\n";

    if (!plots.empty()) {
        os << "## Plots\n\n";
        for (const auto& [caption, rel_path] : plots)
            os << "![" << caption << "](" << rel_path << ")\n\n";
    }
    return os.str();
}

void write_report(const ReportContext& context, const ObservableSet& observables,
                  const std::vector<std::pair<std::string, std::string>>& plots,
                  const std::string& out_path) {
    const auto base = std::filesystem::path(out_path).parent_path();
    for (const auto& [caption, rel_path] : plots) {
        const auto target = base / rel_path;
        if (!std::filesystem::exists(target))
            throw Error("write_report: referenced plot '" + rel_path + "' not found");
    }
    std::ofstream os(out_path);
    if (!os) throw Error("write_report: cannot open '" + out_path + "'");
    os << render_report(context, observables, plots);
}

} // namespace topomd
