#include "topomd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace topomd {

namespace {

Vec3 center_of_mass(const std::vector<Vec3>& coords, const std::vector<int>& ids) {
    Vec3 com{};
    for (int id : ids) com += coords[static_cast<std::size_t>(id)];
    return com * (1.0 / static_cast<double>(ids.size()));
}

} // namespace

Applicability applicability_for(const Topology& topology) {
    Applicability a;
    switch (topology.architecture) {
        case Architecture::Linear:
            a.chain = topology.backbone;
            break;
        case Architecture::Ring:
            a.end_to_end = false;  // no free ends
            a.chain = topology.backbone;
            a.chain_closed = true;
            break;
        case Architecture::Brush:
            a.chain = topology.backbone;  // side chains excluded
            break;
        case Architecture::Star:
            if (!topology.arms.empty()) a.chain = topology.arms.front();
            break;
        case Architecture::Dendrimer:
            a.end_to_end = false;
            a.persistence = false;
            break;
    }
    return a;
}

double radius_of_gyration_sq(const std::vector<Vec3>& coords,
                             const std::vector<int>& ids) {
    if (ids.empty()) throw Error("radius_of_gyration_sq: empty selection");
    const Vec3 com = center_of_mass(coords, ids);
    double sum = 0.0;
    for (int id : ids) sum += norm2(coords[static_cast<std::size_t>(id)] - com);
    return sum / static_cast<double>(ids.size());
}

double end_to_end(const std::vector<Vec3>& coords, const std::vector<int>& chain) {
    if (chain.size() < 2) throw Error("end_to_end: chain needs at least 2 beads");
    return norm(coords[static_cast<std::size_t>(chain.back())] -
                coords[static_cast<std::size_t>(chain.front())]);
}

PersistenceFit persistence_length(std::span<const TrajectoryFrame> frames,
                                  const std::vector<int>& chain, bool closed) {
    if (chain.size() < 3) throw Error("persistence_length: chain needs >= 3 beads");
    if (frames.empty()) throw Error("persistence_length: no frames");

    const int n_bonds = static_cast<int>(chain.size()) - (closed ? 0 : 1);
    const int s_max = closed ? n_bonds / 2 : n_bonds - 1;
    if (s_max < 1) throw Error("persistence_length: chain too short");

    std::vector<double> sum(static_cast<std::size_t>(s_max) + 1, 0.0);
    std::vector<long> count(static_cast<std::size_t>(s_max) + 1, 0);
    std::vector<Vec3> unit(static_cast<std::size_t>(n_bonds));

    for (const auto& frame : frames) {
        for (int k = 0; k < n_bonds; ++k) {
            const Vec3 b =
                frame.unwrapped[static_cast<std::size_t>(
                    chain[static_cast<std::size_t>((k + 1) % static_cast<int>(chain.size()))])] -
                frame.unwrapped[static_cast<std::size_t>(chain[static_cast<std::size_t>(k)])];
            const double len = norm(b);
            if (len == 0.0) throw Error("persistence_length: degenerate bond");
            unit[static_cast<std::size_t>(k)] = b * (1.0 / len);
        }
        for (int s = 1; s <= s_max; ++s) {
            const int origins = closed ? n_bonds : n_bonds - s;
            for (int i = 0; i < origins; ++i) {
                sum[static_cast<std::size_t>(s)] +=
                    dot(unit[static_cast<std::size_t>(i)],
                        unit[static_cast<std::size_t>((i + s) % n_bonds)]);
                ++count[static_cast<std::size_t>(s)];
            }
        }
    }

    PersistenceFit fit;
    for (int s = 1; s <= s_max; ++s)
        fit.correlation.emplace_back(
            s, sum[static_cast<std::size_t>(s)] /
                   static_cast<double>(count[static_cast<std::size_t>(s)]));

    const double c1 = fit.correlation.front().second;
    if (c1 <= 0.0)
        throw Error("persistence_length: correlation at s = 1 is not positive");

    // Leading range where the decay model is meaningful.
    int last = 0;
    for (const auto& [s, c] : fit.correlation) {
        if (c < 0.05) break;
        last = s;
    }
    if (last == 0) last = 1;  // 0 < c1 < 0.05: fall back to the first separation
    fit.fit_s_max = last;

    double sxy = 0.0;
    double sxx = 0.0;
    for (int s = 1; s <= last; ++s) {
        const double y = std::log(fit.correlation[static_cast<std::size_t>(s - 1)].second);
        sxy += s * y;
        sxx += static_cast<double>(s) * s;
    }
    const double k = -sxy / sxx;  // model ln c = -k s
    if (k < 1e-12) {
        fit.infinite = true;
        fit.lp = std::numeric_limits<double>::infinity();
        return fit;
    }
    fit.lp = 1.0 / k;
    double ss = 0.0;
    for (int s = 1; s <= last; ++s) {
        const double y = std::log(fit.correlation[static_cast<std::size_t>(s - 1)].second);
        ss += (y + k * s) * (y + k * s);
    }
    fit.residual = std::sqrt(ss / last);
    return fit;
}

MsdResult msd_and_diffusion(std::span<const TrajectoryFrame> frames,
                            const std::vector<int>& com_ids, double dt) {
    if (frames.size() < 2) throw Error("msd_and_diffusion: need at least 2 frames");
    if (com_ids.empty()) throw Error("msd_and_diffusion: empty selection");

    std::vector<long> steps;
    std::vector<Vec3> com;
    steps.reserve(frames.size());
    com.reserve(frames.size());
    for (const auto& f : frames) {
        steps.push_back(f.step);
        com.push_back(center_of_mass(f.unwrapped, com_ids));
    }

    std::map<long, std::pair<double, long>> bins;  // lag steps -> (sum, count)
    for (std::size_t a = 0; a < com.size(); ++a)
        for (std::size_t b = a + 1; b < com.size(); ++b) {
            auto& bin = bins[steps[b] - steps[a]];
            bin.first += norm2(com[b] - com[a]);
            bin.second += 1;
        }

    MsdResult result;
    result.curve.emplace_back(0.0, 0.0);
    for (const auto& [lag, bin] : bins)
        result.curve.emplace_back(static_cast<double>(lag) * dt,
                                  bin.first / static_cast<double>(bin.second));

    const double span_time = static_cast<double>(steps.back() - steps.front()) * dt;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& [t, m] : result.curve) {
        if (t <= 0.0 || t > span_time / 2.0) continue;
        sxy += t * m;
        sxx += t * t;
    }
    result.diffusion = sxx > 0.0 ? sxy / (6.0 * sxx) : 0.0;
    return result;
}

std::vector<std::pair<double, double>> form_factor(
    std::span<const TrajectoryFrame> frames, const std::vector<int>& ids,
    const std::vector<double>& q_grid) {
    if (q_grid.empty()) throw Error("form_factor: empty q grid");
    for (double q : q_grid)
        if (q <= 0.0) throw Error("form_factor: q values must be positive");
    if (frames.empty()) throw Error("form_factor: no frames");
    if (ids.empty()) throw Error("form_factor: empty selection");

    const std::size_t n = ids.size();
    std::vector<double> acc(q_grid.size(), 0.0);
    std::vector<double> dist;
    dist.reserve(n * (n - 1) / 2);
    for (const auto& frame : frames) {
        dist.clear();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                dist.push_back(norm(
                    frame.unwrapped[static_cast<std::size_t>(ids[a])] -
                    frame.unwrapped[static_cast<std::size_t>(ids[b])]));
        for (std::size_t k = 0; k < q_grid.size(); ++k) {
            const double q = q_grid[k];
            double s = static_cast<double>(n);  // i == j terms
            for (double r : dist) {
                const double qr = q * r;
                s += 2.0 * (qr == 0.0 ? 1.0 : std::sin(qr) / qr);
            }
            acc[k] += s / static_cast<double>(n * n);
        }
    }

    std::vector<std::pair<double, double>> out;
    out.reserve(q_grid.size());
    for (std::size_t k = 0; k < q_grid.size(); ++k)
        out.emplace_back(q_grid[k], acc[k] / static_cast<double>(frames.size()));
    return out;
}

std::vector<std::pair<double, double>> rdf(std::span<const TrajectoryFrame> frames,
                                           const std::vector<int>& ids,
                                           double bin_width, double r_max) {
    if (bin_width <= 0.0) throw Error("rdf: bin width must be positive");
    if (ids.size() < 2) throw Error("rdf: need at least 2 beads");
    if (frames.empty()) throw Error("rdf: no frames");

    const int n_bins = static_cast<int>(std::ceil(r_max / bin_width - 1e-12));
    std::vector<long> counts(static_cast<std::size_t>(std::max(n_bins, 0)), 0);
    long total_pairs = 0;
    for (const auto& frame : frames) {
        for (std::size_t a = 0; a < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b) {
                ++total_pairs;
                const double r = norm(
                    frame.unwrapped[static_cast<std::size_t>(ids[a])] -
                    frame.unwrapped[static_cast<std::size_t>(ids[b])]);
                const int bin = static_cast<int>(r / bin_width);
                if (bin >= 0 && bin < n_bins) ++counts[static_cast<std::size_t>(bin)];
            }
    }

    std::vector<std::pair<double, double>> out;
    out.reserve(counts.size());
    for (int k = 0; k < n_bins; ++k)
        out.emplace_back((k + 0.5) * bin_width,
                         static_cast<double>(counts[static_cast<std::size_t>(k)]) /
                             (static_cast<double>(total_pairs) * bin_width));
    return out;
}

std::vector<double> default_q_grid(double box_side, int n_points) {
    const double q_min = 2.0 * M_PI / box_side;
    const double q_max = 2.0 * M_PI / 0.5;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        const double f = n_points == 1 ? 0.0
                                       : static_cast<double>(k) / (n_points - 1);
        grid.push_back(q_min * std::pow(q_max / q_min, f));
    }
    return grid;
}

ObservableSet analyze(const Trajectory& trajectory, const Topology& topology,
                      const AnalysisOptions& options) {
    if (trajectory.frames.size() < 2) throw Error("analyze: need at least 2 frames");

    const auto polymer = trajectory.polymer_ids();
    if (polymer.empty()) throw Error("analyze: no polymer beads");
    const Applicability rules = applicability_for(topology);

    // Second-half window: frames at step >= total_steps / 2.
    const long total = trajectory.frames.back().step;
    std::size_t first = 0;
    while (first < trajectory.frames.size() &&
           2 * trajectory.frames[first].step < total)
        ++first;
    std::span<const TrajectoryFrame> window(trajectory.frames.data() + first,
                                            trajectory.frames.size() - first);

    ObservableSet out;
    double rg2_sum = 0.0;
    for (const auto& frame : trajectory.frames)
        out.rg2_series.emplace_back(frame.step,
                                    radius_of_gyration_sq(frame.unwrapped, polymer));
    for (const auto& frame : window) rg2_sum += radius_of_gyration_sq(frame.unwrapped, polymer);
    out.rg2_mean = rg2_sum / static_cast<double>(window.size());

    if (rules.end_to_end && rules.chain.size() >= 2) {
        std::vector<std::pair<long, double>> series;
        for (const auto& frame : trajectory.frames)
            series.emplace_back(frame.step, end_to_end(frame.unwrapped, rules.chain));
        double sum = 0.0;
        for (const auto& frame : window) sum += end_to_end(frame.unwrapped, rules.chain);
        out.ree_series = std::move(series);
        out.ree_mean = sum / static_cast<double>(window.size());
    }

    if (rules.persistence && rules.chain.size() >= 3) {
        if (topology.architecture == Architecture::Star && options.star_average_arms) {
            // Optional arm average; keeps the single-arm default intact.
            double lp_sum = 0.0;
            int n_ok = 0;
            PersistenceFit first_fit;
            for (std::size_t a = 0; a < topology.arms.size(); ++a) {
                const auto fit = persistence_length(window, topology.arms[a], false);
                if (a == 0) first_fit = fit;
                if (!fit.infinite) {
                    lp_sum += fit.lp;
                    ++n_ok;
                }
            }
            if (n_ok > 0) first_fit.lp = lp_sum / n_ok;
            out.lp = first_fit;
        } else {
            out.lp = persistence_length(window, rules.chain, rules.chain_closed);
        }
    }

    out.msd = msd_and_diffusion(window, polymer, options.dt);
    out.form_factor =
        form_factor(window, polymer, default_q_grid(trajectory.box_side, options.q_points));
    if (polymer.size() >= 2) {
        const double r_max =
            options.rdf_r_max > 0.0 ? options.rdf_r_max : trajectory.box_side / 2.0;
        out.rdf = rdf(window, polymer, options.rdf_bin_width, r_max);
    }
    return out;
}

} // namespace topomd
