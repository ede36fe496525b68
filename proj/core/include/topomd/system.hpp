#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "topomd/error.hpp"
#include "topomd/vec3.hpp"

namespace topomd {

enum class Species : std::uint8_t { Polymer = 0, Solvent = 1 };

/// Periodic cubic box, side B, periodic in all three dimensions.
struct SimBox {
    double side = 0.0;

    /// Fold p into [0, side) and count the crossings into image.
    void wrap(Vec3& p, std::array<int, 3>& image) const;

    double volume() const { return side * side * side; }
};

/// Nearest-image displacement: each component of the result lies in
/// (-B/2, B/2] and equals the input modulo box translations.
Vec3 minimum_image(const Vec3& d, const SimBox& box);

struct Bead {
    int id = 0;
    Species species = Species::Polymer;
    Vec3 position;                  // wrapped, components in [0, B)
    std::array<int, 3> image{0, 0, 0};
    Vec3 velocity;
    double mass = 1.0;

    Vec3 unwrapped(const SimBox& box) const {
        return {position.x + box.side * image[0],
                position.y + box.side * image[1],
                position.z + box.side * image[2]};
    }
};

/// FENE bond between two polymer beads, i != j.
struct Bond {
    int i = 0;
    int j = 0;
};

enum class Architecture { Linear, Ring, Brush, Star, Dendrimer };

std::string to_string(Architecture a);
Architecture architecture_from_string(const std::string& s);

/// Structural annotations consumed by the per-topology analysis rules.
/// Ordered lists are bonded paths; star arms include the core bead as
/// their first entry so each arm is a valid chain from core to tip.
struct Topology {
    Architecture architecture = Architecture::Linear;
    std::vector<int> backbone;               // linear / ring / brush
    std::vector<std::vector<int>> arms;      // star
    std::vector<int> generations;            // dendrimer, one label per polymer bead
    std::vector<int> graft_points;           // brush
};

struct SystemState {
    std::vector<Bead> beads;
    std::vector<Bond> bonds;
    Topology topology;
    SimBox box;
    long step = 0;

    std::size_t size() const { return beads.size(); }
    std::size_t polymer_count() const;
    std::size_t solvent_count() const { return beads.size() - polymer_count(); }
    std::vector<int> polymer_ids() const;
};

/// Species-pair LJ table. sigma = 1 and r_cut = 2.5 sigma unless overridden.
struct InteractionParams {
    double eps_pp = 1.0;
    double eps_ss = 1.0;
    double eps_sp = 1.0;
    double sigma = 1.0;
    double r_cut = 2.5;

    double eps(Species a, Species b) const {
        if (a == Species::Polymer && b == Species::Polymer) return eps_pp;
        if (a == Species::Solvent && b == Species::Solvent) return eps_ss;
        return eps_sp;
    }
};

struct ThermostatSpec {
    enum class Kind { Langevin, NoseHoover, None };  // None: test-only NVE mode

    Kind kind = Kind::Langevin;
    double T = 1.0;
    double gamma = 1.0;   // Langevin friction
    double Q = 0.0;       // Nose-Hoover fictitious mass; 0 selects 0.1 * g

    double effective_q(std::size_t n_beads) const {
        return Q > 0.0 ? Q : 0.1 * 3.0 * static_cast<double>(n_beads);
    }
};

std::string to_string(ThermostatSpec::Kind k);

struct RunSpec {
    long steps = 0;
    double dt = 0.01;
    long dump_every = 100;
    std::uint64_t seed = 0;
};

/// Instantaneous kinetic temperature sum(m v^2) / g with g = 3 n_beads
/// and k_B = 1. Throws on an empty system.
double kinetic_temperature(const SystemState& state);

/// Verify the structural invariants every generator output must satisfy:
/// dense ids, wrapped positions, bondless solvent, per-architecture bond
/// counts, bonded consecutive entries in ordered topology lists.
/// Returns a list of violations (empty when the state is sound).
std::vector<std::string> check_state_invariants(const SystemState& state);

/// check_state_invariants, throwing Error on the first violation list.
void require_valid_state(const SystemState& state);

} // namespace topomd
