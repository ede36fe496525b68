#include "topomd/forcefield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace topomd {

PairTerm lj_pair(double r, double eps_ab, double sigma, double r_cut) {
    if (r <= 0.0)
        throw OverlapError("lj_pair: zero pair distance", -1, -1);
    if (r >= r_cut || eps_ab == 0.0) return {0.0, 0.0};
    const double sr2 = sigma * sigma / (r * r);
    const double sr6 = sr2 * sr2 * sr2;
    const double sr12 = sr6 * sr6;
    const double sc2 = sigma * sigma / (r_cut * r_cut);
    const double sc6 = sc2 * sc2 * sc2;
    const double sc12 = sc6 * sc6;
    PairTerm t;
    t.energy = 4.0 * eps_ab * (sr12 - sr6 - sc12 + sc6);
    t.force = 24.0 * eps_ab * (2.0 * sr12 - sr6) / r;
    return t;
}

PairTerm fene_pair(double r, const FeneParams& p) {
    if (r <= 0.0)
        throw OverlapError("fene_pair: zero bond length", -1, -1);
    if (r >= p.R0)
        throw OverstretchError("fene_pair: bond length " + std::to_string(r) +
                                   " >= R0 = " + std::to_string(p.R0),
                               -1, -1);
    const double x2 = (r / p.R0) * (r / p.R0);
    PairTerm t;
    t.energy = -0.5 * p.K * p.R0 * p.R0 * std::log(1.0 - x2);
    t.force = -p.K * r / (1.0 - x2);
    // Purely repulsive LJ branch, active below the potential minimum.
    const double wca_cut = std::pow(2.0, 1.0 / 6.0) * p.sigma;
    if (r <= wca_cut) {
        const double sr2 = p.sigma * p.sigma / (r * r);
        const double sr6 = sr2 * sr2 * sr2;
        const double sr12 = sr6 * sr6;
        t.energy += 4.0 * p.eps * (sr12 - sr6) + p.eps;
        t.force += 24.0 * p.eps * (2.0 * sr12 - sr6) / r;
    }
    return t;
}

CellList::CellList(const SystemState& state, double r_cut) {
    rebuild(state, r_cut);
}

void CellList::rebuild(const SystemState& state, double r_cut) {
    n_beads_ = static_cast<int>(state.beads.size());
    const double b = state.box.side;
    const int ncell = static_cast<int>(std::floor(b / r_cut));
    if (ncell < 3) {  // all-pairs fallback
        ncell_ = 0;
        return;
    }
    const auto n_buckets =
        static_cast<std::size_t>(ncell) * ncell * ncell;
    if (ncell != ncell_ || cells_.size() != n_buckets) {
        ncell_ = ncell;
        cells_.resize(n_buckets);
    }
    for (auto& bucket : cells_) bucket.clear();
    const double inv_side = static_cast<double>(ncell_) / b;
    for (const auto& bead : state.beads) {
        auto cell_of = [&](double v) {
            int c = static_cast<int>(v * inv_side);
            return std::min(c, ncell_ - 1);  // guard v just below b
        };
        const int cx = cell_of(bead.position.x);
        const int cy = cell_of(bead.position.y);
        const int cz = cell_of(bead.position.z);
        cells_[static_cast<std::size_t>((cz * ncell_ + cy) * ncell_ + cx)]
            .push_back(bead.id);
    }
}

CellList build_cell_list(const SystemState& state, double r_cut) {
    return CellList(state, r_cut);
}

ForceField::ForceField(InteractionParams params, FeneParams fene)
    : params_(params), fene_(fene) {}

void ForceField::bind(const SystemState& state) {
    adjacency_.assign(state.beads.size(), {});
    for (const auto& bond : state.bonds) {
        adjacency_[static_cast<std::size_t>(bond.i)].push_back(bond.j);
        adjacency_[static_cast<std::size_t>(bond.j)].push_back(bond.i);
    }
}

bool ForceField::excluded(int i, int j) const {
    const auto& adj = adjacency_[static_cast<std::size_t>(i)];
    return std::find(adj.begin(), adj.end(), j) != adj.end();
}

void ForceField::evaluate(const SystemState& state, ForceAccumulator& out) const {
    const std::size_t n = state.beads.size();
    out.force.assign(n, Vec3{});
    out.potential_energy = 0.0;
    if (n < 2 && state.bonds.empty()) return;

    const double r_cut = params_.r_cut * params_.sigma;
    const double r_cut2 = r_cut * r_cut;
    const CellList cells(state, r_cut);

    const auto& beads = state.beads;
    cells.for_each_pair([&](int i, int j) {
        const Vec3 d = minimum_image(
            beads[static_cast<std::size_t>(i)].position -
                beads[static_cast<std::size_t>(j)].position,
            state.box);
        const double r2 = norm2(d);
        if (r2 >= r_cut2) return;
        if (excluded(i, j)) return;
        if (r2 == 0.0)
            throw OverlapError("overlapping beads " + std::to_string(i) + " and " +
                                   std::to_string(j),
                               i, j);
        const double r = std::sqrt(r2);
        const double eps = params_.eps(beads[static_cast<std::size_t>(i)].species,
                                       beads[static_cast<std::size_t>(j)].species);
        const PairTerm t = lj_pair(r, eps, params_.sigma, r_cut);
        const Vec3 f = (t.force / r) * d;
        out.force[static_cast<std::size_t>(i)] += f;
        out.force[static_cast<std::size_t>(j)] -= f;
        out.potential_energy += t.energy;
    });

    for (const auto& bond : state.bonds) {
        const Vec3 d = minimum_image(
            beads[static_cast<std::size_t>(bond.i)].position -
                beads[static_cast<std::size_t>(bond.j)].position,
            state.box);
        const double r = norm(d);
        if (r == 0.0)
            throw OverlapError("overlapping bonded beads " + std::to_string(bond.i) +
                                   " and " + std::to_string(bond.j),
                               bond.i, bond.j);
        if (r >= fene_.R0)
            throw OverstretchError("bond " + std::to_string(bond.i) + "-" +
                                       std::to_string(bond.j) + " stretched to " +
                                       std::to_string(r) + " >= R0",
                                   bond.i, bond.j);
        const PairTerm t = fene_pair(r, fene_);
        const Vec3 f = (t.force / r) * d;
        out.force[static_cast<std::size_t>(bond.i)] += f;
        out.force[static_cast<std::size_t>(bond.j)] -= f;
        out.potential_energy += t.energy;
    }
}

ForceAccumulator compute_forces(const SystemState& state,
                                const InteractionParams& params,
                                const FeneParams& fene) {
    ForceField ff(params, fene);
    ff.bind(state);
    ForceAccumulator acc;
    ff.evaluate(state, acc);
    return acc;
}

} // namespace topomd
