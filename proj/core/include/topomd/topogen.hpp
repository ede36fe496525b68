#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topomd/system.hpp"

namespace topomd {

/// Parameters for one initial-configuration build. Only the fields of the
/// selected architecture are consulted.
struct GeneratorSpec {
    Architecture architecture = Architecture::Linear;

    int N = 0;              // linear / ring: chain length
    int N_b = 0;            // brush: backbone length
    double sigma_g = 0.0;   // brush: grafting density in [0, 1]
    int N_s = 0;            // brush: side chain length; dendrimer: spacer length
    int N_a = 0;            // star: arm length
    int m = 0;              // star: number of arms
    int G = 0;              // dendrimer: generations
    int b = 0;              // dendrimer: branching factor

    double B = 0.0;         // box side
    double n_s = 0.0;       // solvent number density
    std::uint64_t seed = 0;

    /// All violated constraints, empty when the spec is buildable.
    std::vector<std::string> validate() const;
};

/// Dispatch on spec.architecture. Throws Error on invalid specs or
/// placement failure. Output satisfies all generator invariants:
/// bond lengths in (0.8, 1.1), no two beads within 0.9 sigma, topology
/// annotations consistent, deterministic for a fixed (spec, seed).
SystemState generate(const GeneratorSpec& spec);

SystemState generate_linear(int N, double B, double n_s, std::uint64_t seed);
SystemState generate_ring(int N, double B, double n_s, std::uint64_t seed);
SystemState generate_brush(int N_b, double sigma_g, int N_s, double B, double n_s,
                           std::uint64_t seed);
SystemState generate_star(int N_a, int m, double B, double n_s, std::uint64_t seed);
SystemState generate_dendrimer(int G, int b, int N_s, double B, double n_s,
                               std::uint64_t seed);

/// Add round(n_s * B^3) solvent beads at uniform random positions, each at
/// least 0.9 sigma away from every existing bead.
SystemState pack_solvent(SystemState state, double n_s, std::uint64_t seed);

/// Expected solvent bead count for a density and box side.
long solvent_count(double n_s, double B);

} // namespace topomd
