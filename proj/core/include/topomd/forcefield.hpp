#pragma once

#include <utility>
#include <vector>

#include "topomd/system.hpp"

namespace topomd {

/// FENE bond parameters; the repulsive LJ+eps term inside the bond
/// potential acts only for r <= 2^{1/6} sigma (Kremer-Grest convention).
struct FeneParams {
    double K = 30.0;
    double R0 = 1.5;
    double eps = 1.0;
    double sigma = 1.0;
};

/// (energy, force magnitude) of a pair interaction. The force magnitude
/// is -dU/dr: positive pushes the pair apart.
struct PairTerm {
    double energy = 0.0;
    double force = 0.0;
};

/// Truncated-shifted LJ: U(r_cut) = 0 exactly, (0, 0) for r >= r_cut.
/// Throws OverlapError for r == 0.
PairTerm lj_pair(double r, double eps_ab, double sigma, double r_cut);

/// FENE bond term, defined on (0, R0). Throws OverstretchError at r >= R0.
PairTerm fene_pair(double r, const FeneParams& p);

/// Linked-cell neighbor search over the periodic box. Falls back to an
/// all-pairs sweep when fewer than 3 cells fit per side.
class CellList {
public:
    CellList() = default;
    CellList(const SystemState& state, double r_cut);

    /// Re-bin a configuration, reusing bucket storage across calls.
    void rebuild(const SystemState& state, double r_cut);

    bool all_pairs() const { return ncell_ == 0; }
    int cells_per_side() const { return ncell_; }

    /// Visit every unordered candidate pair at most once; every pair with
    /// minimum-image distance <= r_cut is visited. Deterministic order.
    template <typename F>
    void for_each_pair(F&& f) const {
        if (all_pairs()) {
            const int n = n_beads_;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) f(i, j);
            return;
        }
        for (int cz = 0; cz < ncell_; ++cz)
            for (int cy = 0; cy < ncell_; ++cy)
                for (int cx = 0; cx < ncell_; ++cx) {
                    const auto& home = bucket(cx, cy, cz);
                    for (std::size_t a = 0; a < home.size(); ++a)
                        for (std::size_t b = a + 1; b < home.size(); ++b)
                            f(home[a], home[b]);
                    for (const auto& off : kHalfStencil) {
                        const auto& other =
                            bucket(cx + off[0], cy + off[1], cz + off[2]);
                        for (int i : home)
                            for (int j : other) f(i, j);
                    }
                }
    }

private:
    static constexpr int kHalfStencil[13][3] = {
        {1, 0, 0},  {-1, 1, 0}, {0, 1, 0},  {1, 1, 0},  {-1, -1, 1},
        {0, -1, 1}, {1, -1, 1}, {-1, 0, 1}, {0, 0, 1},  {1, 0, 1},
        {-1, 1, 1}, {0, 1, 1},  {1, 1, 1}};

    const std::vector<int>& bucket(int cx, int cy, int cz) const {
        cx = (cx + ncell_) % ncell_;
        cy = (cy + ncell_) % ncell_;
        cz = (cz + ncell_) % ncell_;
        return cells_[static_cast<std::size_t>((cz * ncell_ + cy) * ncell_ + cx)];
    }

    int ncell_ = 0;   // 0 marks the all-pairs fallback
    int n_beads_ = 0;
    std::vector<std::vector<int>> cells_;
};

CellList build_cell_list(const SystemState& state, double r_cut);

/// Per-bead forces plus total potential energy of one configuration.
struct ForceAccumulator {
    std::vector<Vec3> force;
    double potential_energy = 0.0;
};

/// Species-resolved truncated-shifted LJ on non-bonded pairs plus FENE on
/// bonded pairs (directly bonded beads are excluded from the plain LJ).
/// Owns the bond exclusion table so repeated evaluations avoid rebuilds.
class ForceField {
public:
    ForceField(InteractionParams params, FeneParams fene);

    /// Rebuild the exclusion table for a system's bonds. Must be called
    /// before evaluate() whenever connectivity changes.
    void bind(const SystemState& state);

    void evaluate(const SystemState& state, ForceAccumulator& out) const;

    const InteractionParams& params() const { return params_; }
    const FeneParams& fene() const { return fene_; }

private:
    bool excluded(int i, int j) const;

    InteractionParams params_;
    FeneParams fene_;
    std::vector<std::vector<int>> adjacency_;
    // per-evaluation workspaces, retained to avoid reallocation in the
    // integration loop
    mutable CellList cells_;
    mutable std::vector<Vec3> pos_;
    mutable std::vector<Species> species_;
};

ForceAccumulator compute_forces(const SystemState& state,
                                const InteractionParams& params,
                                const FeneParams& fene);

} // namespace topomd
