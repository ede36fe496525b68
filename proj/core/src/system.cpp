#include "topomd/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace topomd {

void SimBox::wrap(Vec3& p, std::array<int, 3>& image) const {
    double* c = &p.x;
    for (int k = 0; k < 3; ++k) {
        const double n = std::floor(c[k] / side);
        if (n != 0.0) {
            c[k] -= n * side;
            image[k] += static_cast<int>(n);
        }
        // floor rounding can leave c[k] == side for values just below a
        // box multiple; fold that onto 0 so [0, B) holds exactly.
        if (c[k] >= side) {
            c[k] -= side;
            image[k] += 1;
        }
        if (c[k] < 0.0) {
            c[k] += side;
            image[k] -= 1;
        }
    }
}

Vec3 minimum_image(const Vec3& d, const SimBox& box) {
    const double b = box.side;
    auto fold = [b](double v) { return v - b * std::ceil(v / b - 0.5); };
    return {fold(d.x), fold(d.y), fold(d.z)};
}

std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::Linear: return "linear";
        case Architecture::Ring: return "ring";
        case Architecture::Brush: return "brush";
        case Architecture::Star: return "star";
        case Architecture::Dendrimer: return "dendrimer";
    }
    return "unknown";
}

Architecture architecture_from_string(const std::string& s) {
    if (s == "linear") return Architecture::Linear;
    if (s == "ring") return Architecture::Ring;
    if (s == "brush") return Architecture::Brush;
    if (s == "star") return Architecture::Star;
    if (s == "dendrimer") return Architecture::Dendrimer;
    throw Error("unknown architecture '" + s + "'");
}

std::string to_string(ThermostatSpec::Kind k) {
    switch (k) {
        case ThermostatSpec::Kind::Langevin: return "langevin";
        case ThermostatSpec::Kind::NoseHoover: return "nose-hoover";
        case ThermostatSpec::Kind::None: return "none";
    }
    return "unknown";
}

std::size_t SystemState::polymer_count() const {
    std::size_t n = 0;
    for (const auto& b : beads)
        if (b.species == Species::Polymer) ++n;
    return n;
}

std::vector<int> SystemState::polymer_ids() const {
    std::vector<int> ids;
    for (const auto& b : beads)
        if (b.species == Species::Polymer) ids.push_back(b.id);
    return ids;
}

double kinetic_temperature(const SystemState& state) {
    if (state.beads.empty()) throw Error("kinetic_temperature: empty system");
    double twice_ke = 0.0;
    for (const auto& b : state.beads) twice_ke += b.mass * norm2(b.velocity);
    const double g = 3.0 * static_cast<double>(state.beads.size());
    return twice_ke / g;
}

std::vector<std::string> check_state_invariants(const SystemState& state) {
    std::vector<std::string> bad;
    auto fail = [&bad](const std::string& msg) { bad.push_back(msg); };

    if (state.box.side <= 0.0) fail("box side must be positive");

    const int n = static_cast<int>(state.beads.size());
    for (int k = 0; k < n; ++k) {
        const Bead& b = state.beads[static_cast<std::size_t>(k)];
        if (b.id != k) {
            fail("bead ids not dense: index " + std::to_string(k) + " holds id " +
                 std::to_string(b.id));
            break;
        }
        if (!is_finite(b.position) || !is_finite(b.velocity))
            fail("non-finite coordinates on bead " + std::to_string(k));
        const double* c = &b.position.x;
        for (int d = 0; d < 3; ++d)
            if (c[d] < 0.0 || c[d] >= state.box.side) {
                fail("bead " + std::to_string(k) + " position outside [0, B)");
                break;
            }
        if (b.mass != 1.0) fail("bead " + std::to_string(k) + " mass != 1");
    }

    std::set<std::pair<int, int>> seen;
    for (const auto& bond : state.bonds) {
        if (bond.i == bond.j) fail("self bond on bead " + std::to_string(bond.i));
        if (bond.i < 0 || bond.i >= n || bond.j < 0 || bond.j >= n) {
            fail("bond endpoint out of range");
            continue;
        }
        if (state.beads[static_cast<std::size_t>(bond.i)].species != Species::Polymer ||
            state.beads[static_cast<std::size_t>(bond.j)].species != Species::Polymer)
            fail("bond touches a solvent bead");
        auto key = std::minmax(bond.i, bond.j);
        if (!seen.insert(key).second)
            fail("duplicate bond (" + std::to_string(bond.i) + "," + std::to_string(bond.j) + ")");
    }

    const std::size_t n_poly = state.polymer_count();
    if (n_poly > 0) {
        const std::size_t expected = state.topology.architecture == Architecture::Ring
                                         ? n_poly
                                         : n_poly - 1;
        if (state.bonds.size() != expected)
            fail("bond count " + std::to_string(state.bonds.size()) + " != expected " +
                 std::to_string(expected) + " for " + to_string(state.topology.architecture));
    }

    auto check_path = [&](const std::vector<int>& ids, const std::string& what, bool closed) {
        std::set<int> uniq(ids.begin(), ids.end());
        if (uniq.size() != ids.size()) fail(what + " contains repeated ids");
        for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
            auto key = std::minmax(ids[k], ids[k + 1]);
            if (!seen.count(key))
                fail(what + " entries " + std::to_string(ids[k]) + "," +
                     std::to_string(ids[k + 1]) + " not bonded");
        }
        if (closed && ids.size() > 2) {
            auto key = std::minmax(ids.front(), ids.back());
            if (!seen.count(key)) fail(what + " not closed by a bond");
        }
    };

    if (!state.topology.backbone.empty())
        check_path(state.topology.backbone, "backbone",
                   state.topology.architecture == Architecture::Ring);
    for (std::size_t a = 0; a < state.topology.arms.size(); ++a)
        check_path(state.topology.arms[a], "arm " + std::to_string(a), false);

    return bad;
}

void require_valid_state(const SystemState& state) {
    auto bad = check_state_invariants(state);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid system state:";
        for (const auto& m : bad) os << "\n  - " << m;
        throw Error(os.str());
    }
}

} // namespace topomd
