#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "topomd/system.hpp"
#include "topomd/trajectory.hpp"

namespace topomd {

/// Per-architecture observable rules. The end-to-end distance and
/// persistence length act on a chain subset: the full chain for linear
/// polymers, the backbone for brushes, one arm (core to tip) for stars,
/// and the cyclic backbone for rings (persistence length only).
struct Applicability {
    bool end_to_end = true;
    bool persistence = true;
    std::vector<int> chain;   // ordered bead ids for chain observables
    bool chain_closed = false;
};

Applicability applicability_for(const Topology& topology);

/// Bond-bond correlation decay fit, <cos theta(s)> = exp(-s / lp).
struct PersistenceFit {
    double lp = 0.0;
    bool infinite = false;          // straight chain: no measurable decay
    int fit_s_max = 0;              // largest separation used in the fit
    double residual = 0.0;          // rms of ln<cos> - (-s/lp) over the fit range
    std::vector<std::pair<int, double>> correlation;  // s, <cos theta(s)>
};

struct MsdResult {
    std::vector<std::pair<double, double>> curve;  // lag time, MSD (lag 0 included)
    double diffusion = 0.0;
};

struct ObservableSet {
    std::vector<std::pair<long, double>> rg2_series;
    double rg2_mean = 0.0;
    std::optional<std::vector<std::pair<long, double>>> ree_series;
    std::optional<double> ree_mean;
    std::optional<PersistenceFit> lp;
    MsdResult msd;
    std::vector<std::pair<double, double>> form_factor;  // q, P(q)
    std::vector<std::pair<double, double>> rdf;          // bin center, g(r)
};

/// Mean squared distance to the center of mass over the selected beads.
double radius_of_gyration_sq(const std::vector<Vec3>& coords,
                             const std::vector<int>& ids);

/// |r_last - r_first| along an ordered chain of unwrapped coordinates.
double end_to_end(const std::vector<Vec3>& coords, const std::vector<int>& chain);

/// Window-averaged bond correlation and its exponential-decay fit. The fit
/// is log-linear least squares through the origin over the leading
/// separations whose correlation stays positive and above 0.05.
PersistenceFit persistence_length(std::span<const TrajectoryFrame> frames,
                                  const std::vector<int>& chain, bool closed);

/// Center-of-mass MSD over all origins in the window plus the diffusion
/// coefficient from a through-origin fit of MSD = 6 D t over lags up to
/// half the window span.
MsdResult msd_and_diffusion(std::span<const TrajectoryFrame> frames,
                            const std::vector<int>& com_ids, double dt);

/// Isotropic intra-polymer structure factor
/// P(q) = < sin(q r_ij) / (q r_ij) >_{i,j} over all ordered pairs
/// including i == j, so P(q -> 0) = 1.
std::vector<std::pair<double, double>> form_factor(
    std::span<const TrajectoryFrame> frames, const std::vector<int>& ids,
    const std::vector<double>& q_grid);

/// Intra-polymer pair distance distribution: histogram over unordered
/// pairs normalized by (pair count * bin width), so the mass in [0, r_max)
/// equals the fraction of pairs within r_max.
std::vector<std::pair<double, double>> rdf(std::span<const TrajectoryFrame> frames,
                                           const std::vector<int>& ids,
                                           double bin_width, double r_max);

/// Logarithmically spaced scattering-vector grid.
std::vector<double> default_q_grid(double box_side, int n_points = 64);

struct AnalysisOptions {
    double dt = 0.01;
    int q_points = 64;
    double rdf_bin_width = 0.1;
    double rdf_r_max = 0.0;        // 0: use B/2
    bool star_average_arms = false;
};

/// Full observable pipeline: series over the whole run, averages and
/// curve observables over the second-half window (frames with
/// step >= total_steps / 2), applicability rules applied per topology.
ObservableSet analyze(const Trajectory& trajectory, const Topology& topology,
                      const AnalysisOptions& options);

} // namespace topomd
