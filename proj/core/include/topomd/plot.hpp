#pragma once

#include <string>
#include <vector>

namespace topomd {

enum class PlotKind { Line, LogLog, Scatter };

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotLabels {
    std::string title;
    std::string x;
    std::string y;
};

/// Write a self-contained SVG (axes, ticks, legend) at `path` and the raw
/// series as tab-separated text next to it (same basename, .tsv).
/// Errors on empty input, mismatched lengths, non-finite values, and
/// non-positive values under LogLog (reported with series and index).
void emit_plot(const std::vector<PlotSeries>& series, PlotKind kind,
               const PlotLabels& labels, const std::string& path);

} // namespace topomd
