#include "topomd/topogen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "topomd/rng.hpp"

namespace topomd {

namespace {

constexpr double kBondLength = 0.97;  // near the FENE minimum
constexpr double kMinSeparation = 0.9;
constexpr double kMinBox = 5.0;  // 2 * r_cut at the default cutoff
constexpr int kTrialsPerBead = 150;
constexpr int kChainRestarts = 40;

struct GrowthFailure {};

/// Wrapped-coordinate occupancy with minimum-image distance queries,
/// bucketed so checks stay O(1) during solvent packing.
class PlacementField {
public:
    explicit PlacementField(const SimBox& box)
        : box_(box),
          ncell_(std::max(1, static_cast<int>(std::floor(box.side / kMinSeparation)))),
          buckets_(static_cast<std::size_t>(ncell_) * ncell_ * ncell_) {}

    bool is_clear(const Vec3& wrapped, double min_sep) const {
        const double min_sep2 = min_sep * min_sep;
        const int cx = cell_of(wrapped.x);
        const int cy = cell_of(wrapped.y);
        const int cz = cell_of(wrapped.z);
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    for (const Vec3& p : bucket(cx + dx, cy + dy, cz + dz))
                        if (norm2(minimum_image(wrapped - p, box_)) < min_sep2)
                            return false;
        return true;
    }

    void insert(const Vec3& wrapped) { mutable_bucket(wrapped).push_back(wrapped); }

    void remove(const Vec3& wrapped) {
        auto& b = mutable_bucket(wrapped);
        auto it = std::find(b.begin(), b.end(), wrapped);
        if (it != b.end()) b.erase(it);
    }

private:
    int cell_of(double v) const {
        int c = static_cast<int>(v / box_.side * ncell_);
        return std::clamp(c, 0, ncell_ - 1);
    }

    const std::vector<Vec3>& bucket(int cx, int cy, int cz) const {
        cx = (cx % ncell_ + ncell_) % ncell_;
        cy = (cy % ncell_ + ncell_) % ncell_;
        cz = (cz % ncell_ + ncell_) % ncell_;
        return buckets_[static_cast<std::size_t>((cz * ncell_ + cy) * ncell_ + cx)];
    }

    std::vector<Vec3>& mutable_bucket(const Vec3& p) {
        const int cx = cell_of(p.x);
        const int cy = cell_of(p.y);
        const int cz = cell_of(p.z);
        return buckets_[static_cast<std::size_t>((cz * ncell_ + cy) * ncell_ + cx)];
    }

    SimBox box_;
    int ncell_;
    std::vector<std::vector<Vec3>> buckets_;
};

Vec3 wrap_of(Vec3 p, const SimBox& box) {
    std::array<int, 3> img{0, 0, 0};
    box.wrap(p, img);
    return p;
}

/// Self-avoiding growth of n beads starting from anchor (the anchor itself
/// is not part of the chain). Appends unwrapped positions to out and
/// registers them in the field; unwinds its own insertions on failure.
bool grow_chain(PlacementField& field, const SimBox& box, Rng& rng,
                const Vec3& anchor_unwrapped, int n, std::vector<Vec3>& out) {
    const std::size_t base = out.size();
    int backtracks_left = 8 * n + 32;
    while (static_cast<int>(out.size() - base) < n) {
        const Vec3 prev = out.size() == base ? anchor_unwrapped : out.back();
        bool placed = false;
        for (int t = 0; t < kTrialsPerBead; ++t) {
            const Vec3 cand = prev + kBondLength * rng.unit_vector();
            const Vec3 w = wrap_of(cand, box);
            if (field.is_clear(w, kMinSeparation)) {
                out.push_back(cand);
                field.insert(w);
                placed = true;
                break;
            }
        }
        if (!placed) {
            if (out.size() == base || backtracks_left-- <= 0) {
                while (out.size() > base) {
                    field.remove(wrap_of(out.back(), box));
                    out.pop_back();
                }
                return false;
            }
            field.remove(wrap_of(out.back(), box));
            out.pop_back();
        }
    }
    return true;
}

SystemState assemble(Architecture arch, const std::vector<Vec3>& unwrapped,
                     const std::vector<Bond>& bonds, Topology topology, double B) {
    SystemState state;
    state.box.side = B;
    state.topology = std::move(topology);
    state.topology.architecture = arch;
    state.bonds = bonds;
    state.beads.reserve(unwrapped.size());

    // Center the polymer's center of mass in the box before wrapping.
    Vec3 com{};
    for (const auto& p : unwrapped) com += p;
    com *= 1.0 / static_cast<double>(unwrapped.size());
    const Vec3 shift = Vec3{B / 2, B / 2, B / 2} - com;

    int id = 0;
    for (const auto& p : unwrapped) {
        Bead bead;
        bead.id = id++;
        bead.species = Species::Polymer;
        bead.position = p + shift;
        state.box.wrap(bead.position, bead.image);
        state.beads.push_back(bead);
    }
    return state;
}

/// Generator postconditions: bond lengths in (0.8, 1.1), non-bonded
/// pairwise separation >= 0.9 over all polymer beads, plus the structural
/// checks. Bonded pairs are exempt from the separation rule (they feel
/// FENE, not plain LJ; small rings have chords below 0.9).
void verify_generated(const SystemState& state) {
    std::set<std::pair<int, int>> bonded;
    for (const auto& bond : state.bonds) {
        bonded.insert(std::minmax(bond.i, bond.j));
        const double r = norm(minimum_image(
            state.beads[static_cast<std::size_t>(bond.i)].position -
                state.beads[static_cast<std::size_t>(bond.j)].position,
            state.box));
        if (r <= 0.8 || r >= 1.1)
            throw Error("generated bond " + std::to_string(bond.i) + "-" +
                        std::to_string(bond.j) + " has length " + std::to_string(r));
    }
    const auto poly = state.polymer_ids();
    for (std::size_t a = 0; a < poly.size(); ++a)
        for (std::size_t b = a + 1; b < poly.size(); ++b) {
            if (bonded.count(std::minmax(poly[a], poly[b]))) continue;
            const double r2 = norm2(minimum_image(
                state.beads[static_cast<std::size_t>(poly[a])].position -
                    state.beads[static_cast<std::size_t>(poly[b])].position,
                state.box));
            if (r2 < kMinSeparation * kMinSeparation)
                throw Error("generated beads " + std::to_string(poly[a]) + " and " +
                            std::to_string(poly[b]) + " closer than 0.9 sigma");
        }
    require_valid_state(state);
}

void require_box(double B) {
    if (B < kMinBox)
        throw Error("box side " + std::to_string(B) + " below minimum " +
                    std::to_string(kMinBox) + " (2 r_cut)");
}

/// Golden-spiral spread of m directions on the unit sphere.
std::vector<Vec3> golden_spiral_directions(int m) {
    std::vector<Vec3> dirs;
    dirs.reserve(static_cast<std::size_t>(m));
    const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < m; ++k) {
        const double z = m == 1 ? 1.0 : 1.0 - 2.0 * (k + 0.5) / m;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * k;
        dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
}

} // namespace

long solvent_count(double n_s, double B) {
    return std::lround(n_s * B * B * B);
}

SystemState generate_linear(int N, double B, double n_s, std::uint64_t seed) {
    if (N < 1) throw Error("linear polymer needs N >= 1");
    require_box(B);
    Rng rng(seed, 0);
    const Vec3 center{B / 2, B / 2, B / 2};
    for (int attempt = 0; attempt < kChainRestarts; ++attempt) {
        PlacementField field({B});
        std::vector<Vec3> pos{center};
        field.insert(center);
        if (!grow_chain(field, {B}, rng, center, N - 1, pos)) continue;

        std::vector<Bond> bonds;
        for (int k = 0; k + 1 < N; ++k) bonds.push_back({k, k + 1});
        Topology topo;
        for (int k = 0; k < N; ++k) topo.backbone.push_back(k);
        SystemState state = assemble(Architecture::Linear, pos, bonds, topo, B);
        state = pack_solvent(std::move(state), n_s, seed);
        verify_generated(state);
        return state;
    }
    throw Error("linear growth failed: box too small for N = " + std::to_string(N));
}

SystemState generate_ring(int N, double B, double n_s, std::uint64_t seed) {
    if (N < 3) throw Error("ring polymer needs N >= 3");
    require_box(B);
    const double radius = N * kBondLength / (2.0 * M_PI);
    if (2.0 * radius >= B)
        throw Error("ring diameter " + std::to_string(2 * radius) +
                    " does not fit in box " + std::to_string(B));

    std::vector<Vec3> pos;
    for (int k = 0; k < N; ++k) {
        const double a = 2.0 * M_PI * k / N;
        pos.push_back({radius * std::cos(a), radius * std::sin(a), 0.0});
    }
    std::vector<Bond> bonds;
    for (int k = 0; k < N; ++k) bonds.push_back({k, (k + 1) % N});
    Topology topo;
    for (int k = 0; k < N; ++k) topo.backbone.push_back(k);

    SystemState state = assemble(Architecture::Ring, pos, bonds, topo, B);
    state = pack_solvent(std::move(state), n_s, seed);
    verify_generated(state);
    return state;
}

SystemState generate_brush(int N_b, double sigma_g, int N_s, double B, double n_s,
                           std::uint64_t seed) {
    if (N_b < 2) throw Error("brush polymer needs N_b >= 2");
    if (sigma_g < 0.0 || sigma_g > 1.0)
        throw Error("grafting density sigma_g must lie in [0, 1]");
    if (N_s < 1) throw Error("brush side chains need N_s >= 1");
    require_box(B);

    const int n_grafts = static_cast<int>(std::lround(sigma_g * N_b));
    std::vector<int> graft_idx;
    for (int k = 0; k < n_grafts; ++k)
        graft_idx.push_back(static_cast<int>(
            std::floor((k + 0.5) * static_cast<double>(N_b) / n_grafts)));

    Rng rng(seed, 0);
    const Vec3 center{B / 2, B / 2, B / 2};
    for (int attempt = 0; attempt < kChainRestarts; ++attempt) {
        PlacementField field({B});
        std::vector<Vec3> pos{center};
        field.insert(center);
        if (!grow_chain(field, {B}, rng, center, N_b - 1, pos)) continue;

        bool ok = true;
        std::vector<Bond> bonds;
        for (int k = 0; k + 1 < N_b; ++k) bonds.push_back({k, k + 1});
        for (int g = 0; g < n_grafts && ok; ++g) {
            const int anchor = graft_idx[static_cast<std::size_t>(g)];
            const std::size_t first = pos.size();
            ok = grow_chain(field, {B}, rng, pos[static_cast<std::size_t>(anchor)],
                            N_s, pos);
            if (!ok) break;
            bonds.push_back({anchor, static_cast<int>(first)});
            for (std::size_t k = first; k + 1 < pos.size(); ++k)
                bonds.push_back({static_cast<int>(k), static_cast<int>(k + 1)});
        }
        if (!ok) continue;

        Topology topo;
        for (int k = 0; k < N_b; ++k) topo.backbone.push_back(k);
        topo.graft_points = graft_idx;
        SystemState state = assemble(Architecture::Brush, pos, bonds, topo, B);
        state = pack_solvent(std::move(state), n_s, seed);
        verify_generated(state);
        return state;
    }
    throw Error("brush growth failed: box too crowded for N_b = " +
                std::to_string(N_b) + ", N_s = " + std::to_string(N_s));
}

SystemState generate_star(int N_a, int m, double B, double n_s, std::uint64_t seed) {
    if (N_a < 1) throw Error("star polymer needs N_a >= 1");
    if (m < 1) throw Error("star polymer needs m >= 1");
    require_box(B);

    const auto dirs = golden_spiral_directions(m);
    double min_angle = M_PI;
    for (std::size_t a = 0; a < dirs.size(); ++a)
        for (std::size_t b = a + 1; b < dirs.size(); ++b)
            min_angle = std::min(min_angle,
                                 std::acos(std::clamp(dot(dirs[a], dirs[b]), -1.0, 1.0)));

    // First-shell radius keeping neighboring arms 0.9 sigma apart; it is a
    // bond length, so it must stay inside the FENE comfort range.
    double r1 = kBondLength;
    if (m > 1)
        r1 = std::max(r1, kMinSeparation / (2.0 * std::sin(min_angle / 2.0)) + 1e-9);
    if (r1 >= 1.1)
        throw Error("star core too crowded: " + std::to_string(m) +
                    " arms cannot be seeded with valid bond lengths");
    const double tip = r1 + (N_a - 1) * kBondLength;
    if (tip >= B / 2.0)
        throw Error("star arm reach " + std::to_string(tip) + " exceeds B/2");

    std::vector<Vec3> pos{{0.0, 0.0, 0.0}};
    std::vector<Bond> bonds;
    Topology topo;
    for (int arm = 0; arm < m; ++arm) {
        std::vector<int> arm_ids{0};
        int prev = 0;
        for (int k = 0; k < N_a; ++k) {
            const double radius = r1 + k * kBondLength;
            pos.push_back(radius * dirs[static_cast<std::size_t>(arm)]);
            const int id = static_cast<int>(pos.size()) - 1;
            bonds.push_back({prev, id});
            arm_ids.push_back(id);
            prev = id;
        }
        topo.arms.push_back(std::move(arm_ids));
    }

    SystemState state = assemble(Architecture::Star, pos, bonds, topo, B);
    state = pack_solvent(std::move(state), n_s, seed);
    verify_generated(state);
    return state;
}

SystemState generate_dendrimer(int G, int b, int N_s, double B, double n_s,
                               std::uint64_t seed) {
    if (G < 1) throw Error("dendrimer needs G >= 1");
    if (b < 2) throw Error("dendrimer needs branching factor b >= 2");
    if (N_s < 1) throw Error("dendrimer needs spacer length N_s >= 1");
    require_box(B);

    Rng rng(seed, 0);
    const Vec3 center{B / 2, B / 2, B / 2};
    for (int attempt = 0; attempt < kChainRestarts; ++attempt) {
        PlacementField field({B});
        std::vector<Vec3> pos{center};
        field.insert(center);
        std::vector<Bond> bonds;
        std::vector<int> generations{0};
        std::vector<int> roots{0};

        bool ok = true;
        for (int g = 1; g <= G && ok; ++g) {
            std::vector<int> next_roots;
            for (int root : roots) {
                for (int branch = 0; branch < b; ++branch) {
                    const std::size_t first = pos.size();
                    ok = grow_chain(field, {B}, rng,
                                    pos[static_cast<std::size_t>(root)], N_s, pos);
                    if (!ok) break;
                    bonds.push_back({root, static_cast<int>(first)});
                    for (std::size_t k = first; k + 1 < pos.size(); ++k)
                        bonds.push_back({static_cast<int>(k), static_cast<int>(k + 1)});
                    for (int k = 0; k < N_s; ++k) generations.push_back(g);
                    next_roots.push_back(static_cast<int>(pos.size()) - 1);
                }
                if (!ok) break;
            }
            roots = std::move(next_roots);
        }
        if (!ok) continue;

        Topology topo;
        topo.generations = std::move(generations);
        SystemState state = assemble(Architecture::Dendrimer, pos, bonds, topo, B);
        state = pack_solvent(std::move(state), n_s, seed);
        verify_generated(state);
        return state;
    }
    throw Error("dendrimer growth failed: box capacity exceeded for G = " +
                std::to_string(G) + ", b = " + std::to_string(b));
}

SystemState pack_solvent(SystemState state, double n_s, std::uint64_t seed) {
    if (n_s < 0.0) throw Error("solvent density must be non-negative");
    const long target = solvent_count(n_s, state.box.side);
    if (target == 0) return state;

    Rng rng(seed, 1);
    PlacementField field(state.box);
    for (const auto& bead : state.beads) field.insert(bead.position);

    const long max_attempts_per_bead = 2000;
    int id = static_cast<int>(state.beads.size());
    for (long k = 0; k < target; ++k) {
        bool placed = false;
        for (long t = 0; t < max_attempts_per_bead; ++t) {
            const Vec3 cand{rng.uniform(0.0, state.box.side),
                            rng.uniform(0.0, state.box.side),
                            rng.uniform(0.0, state.box.side)};
            if (field.is_clear(cand, kMinSeparation)) {
                Bead bead;
                bead.id = id++;
                bead.species = Species::Solvent;
                bead.position = cand;
                state.beads.push_back(bead);
                field.insert(cand);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw Error("solvent packing failed after placing " + std::to_string(k) +
                        " of " + std::to_string(target) + " beads: density too high");
    }
    return state;
}

SystemState generate(const GeneratorSpec& spec) {
    const auto bad = spec.validate();
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid generator spec:";
        for (const auto& m : bad) os << "\n  - " << m;
        throw Error(os.str());
    }
    switch (spec.architecture) {
        case Architecture::Linear:
            return generate_linear(spec.N, spec.B, spec.n_s, spec.seed);
        case Architecture::Ring:
            return generate_ring(spec.N, spec.B, spec.n_s, spec.seed);
        case Architecture::Brush:
            return generate_brush(spec.N_b, spec.sigma_g, spec.N_s, spec.B, spec.n_s,
                                  spec.seed);
        case Architecture::Star:
            return generate_star(spec.N_a, spec.m, spec.B, spec.n_s, spec.seed);
        case Architecture::Dendrimer:
            return generate_dendrimer(spec.G, spec.b, spec.N_s, spec.B, spec.n_s,
                                      spec.seed);
    }
    throw Error("unreachable architecture");
}

std::vector<std::string> GeneratorSpec::validate() const {
    std::vector<std::string> bad;
    switch (architecture) {
        case Architecture::Linear:
            if (N < 1) bad.push_back("N must be >= 1 for linear polymers");
            break;
        case Architecture::Ring:
            if (N < 3) bad.push_back("N must be >= 3 for ring polymers");
            break;
        case Architecture::Brush:
            if (N_b < 2) bad.push_back("N_b must be >= 2");
            if (sigma_g < 0.0 || sigma_g > 1.0) bad.push_back("sigma_g must lie in [0, 1]");
            if (N_s < 1) bad.push_back("N_s must be >= 1");
            break;
        case Architecture::Star:
            if (N_a < 1) bad.push_back("N_a must be >= 1");
            if (m < 1) bad.push_back("m must be >= 1");
            break;
        case Architecture::Dendrimer:
            if (G < 1) bad.push_back("G must be >= 1");
            if (b < 2) bad.push_back("b must be >= 2");
            if (N_s < 1) bad.push_back("N_s must be >= 1");
            break;
    }
    if (B < kMinBox)
        bad.push_back("B must be >= " + std::to_string(kMinBox) + " (2 r_cut)");
    if (n_s < 0.0) bad.push_back("n_s must be >= 0");
    return bad;
}

} // namespace topomd
