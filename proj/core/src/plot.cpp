#include "topomd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "topomd/error.hpp"

namespace topomd {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double to_unit(double v) const {
        const double a = log ? std::log10(v) : v;
        const double l = log ? std::log10(lo) : lo;
        const double h = log ? std::log10(hi) : hi;
        return h == l ? 0.5 : (a - l) / (h - l);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            const int e0 = static_cast<int>(std::floor(std::log10(lo)));
            const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
            for (int e = e0; e <= e1; ++e) {
                const double t = std::pow(10.0, e);
                if (t >= lo * (1 - 1e-12) && t <= hi * (1 + 1e-12)) out.push_back(t);
            }
            if (out.size() < 2) {
                out = {lo, hi};
            }
            return out;
        }
        const double span = hi - lo;
        if (span <= 0.0) return {lo};
        const double raw = span / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double mult : {1.0, 2.0, 5.0, 10.0})
            if (mag * mult >= raw) {
                step = mag * mult;
                break;
            }
        const double first = std::ceil(lo / step) * step;
        for (double t = first; t <= hi + step * 1e-9; t += step) out.push_back(t);
        return out;
    }
};

} // namespace

void emit_plot(const std::vector<PlotSeries>& series, PlotKind kind,
               const PlotLabels& labels, const std::string& path) {
    if (series.empty()) throw Error("emit_plot: no series");
    for (const auto& s : series) {
        if (s.x.empty()) throw Error("emit_plot: series '" + s.name + "' is empty");
        if (s.x.size() != s.y.size())
            throw Error("emit_plot: series '" + s.name + "' has mismatched x/y lengths");
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k]))
                throw Error("emit_plot: non-finite value in series '" + s.name +
                            "' at index " + std::to_string(k));
            if (kind == PlotKind::LogLog && (s.x[k] <= 0.0 || s.y[k] <= 0.0))
                throw Error("emit_plot: non-positive value in series '" + s.name +
                            "' at index " + std::to_string(k) +
                            " cannot be drawn on log axes");
        }
    }

    Axis ax;
    Axis ay;
    ax.log = ay.log = kind == PlotKind::LogLog;
    double xlo = series[0].x[0];
    double xhi = xlo;
    double ylo = series[0].y[0];
    double yhi = ylo;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            xlo = std::min(xlo, s.x[k]);
            xhi = std::max(xhi, s.x[k]);
            ylo = std::min(ylo, s.y[k]);
            yhi = std::max(yhi, s.y[k]);
        }
    if (!ax.log) {
        const double pad = (xhi - xlo) * 0.02;
        xlo -= pad;
        xhi += pad;
        if (xlo == xhi) {
            xlo -= 0.5;
            xhi += 0.5;
        }
    }
    if (!ay.log) {
        const double pad = (yhi - ylo) * 0.05;
        ylo -= pad;
        yhi += pad;
        if (ylo == yhi) {
            ylo -= 0.5;
            yhi += 0.5;
        }
    }
    ax.lo = xlo;
    ax.hi = xhi;
    ay.lo = ylo;
    ay.hi = yhi;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double v) { return kMarginLeft + ax.to_unit(v) * plot_w; };
    auto py = [&](double v) { return kMarginTop + (1.0 - ay.to_unit(v)) * plot_h; };

    std::ofstream os(path);
    if (!os) throw Error("emit_plot: cannot open '" + path + "' for writing");
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
       << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame
    os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
       << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

    for (double t : ax.ticks()) {
        const double x = px(t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << kMarginTop + plot_h
           << "\" x2=\"" << fmt(x) << "\" y2=\"" << kMarginTop + plot_h + 5
           << "\" stroke=\"#333\"/>\n"
           << "<text x=\"" << fmt(x) << "\" y=\"" << kMarginTop + plot_h + 20
           << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
           << fmt(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = py(t);
        os << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << fmt(y) << "\" x2=\""
           << kMarginLeft << "\" y2=\"" << fmt(y) << "\" stroke=\"#333\"/>\n"
           << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(y + 4)
           << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">"
           << fmt(t) << "</text>\n";
    }

    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kMarginTop - 14
       << "\" font-size=\"15\" text-anchor=\"middle\" font-family=\"sans-serif\">"
       << labels.title << "</text>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
       << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
       << labels.x << "</text>\n";
    os << "<text x=\"18\" y=\"" << kHeight / 2
       << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "transform=\"rotate(-90 18 "
       << kHeight / 2 << ")\">" << labels.y << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (kind == PlotKind::Scatter) {
            for (std::size_t k = 0; k < s.x.size(); ++k)
                os << "<circle cx=\"" << fmt(px(s.x[k])) << "\" cy=\""
                   << fmt(py(s.y[k])) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << color
               << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t k = 0; k < s.x.size(); ++k)
                os << fmt(px(s.x[k])) << ',' << fmt(py(s.y[k])) << ' ';
            os << "\"/>\n";
        }
    }

    // legend (skip for a single unnamed series)
    if (series.size() > 1 || !series[0].name.empty()) {
        double ly = kMarginTop + 14;
        for (std::size_t si = 0; si < series.size(); ++si) {
            const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
            const double lx = kMarginLeft + plot_w - 150;
            os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24
               << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
               << "\" stroke-width=\"2\"/>\n"
               << "<text x=\"" << lx + 30 << "\" y=\"" << ly
               << "\" font-size=\"12\" font-family=\"sans-serif\">" << series[si].name
               << "</text>\n";
            ly += 16;
        }
    }
    os << "</svg>\n";

    // raw data sibling for machine reuse
    std::string tsv_path = path;
    const auto dot = tsv_path.find_last_of('.');
    if (dot != std::string::npos) tsv_path.resize(dot);
    tsv_path += ".tsv";
    std::ofstream ts(tsv_path);
    if (!ts) throw Error("emit_plot: cannot open '" + tsv_path + "' for writing");
    ts << "# series\tx\ty\n";
    char buf[64];
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g\t%.17g", s.x[k], s.y[k]);
            ts << (s.name.empty() ? "series" : s.name) << '\t' << buf << '\n';
        }
}

} // namespace topomd
