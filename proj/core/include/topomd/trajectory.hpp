#pragma once

#include <vector>

#include "topomd/system.hpp"

namespace topomd {

/// One dumped configuration: absolute step plus unwrapped coordinates for
/// every bead, indexed by bead id.
struct TrajectoryFrame {
    long step = 0;
    std::vector<Vec3> unwrapped;
};

/// Frame sequence with the per-bead species shared across frames.
/// Frame steps are strictly increasing.
struct Trajectory {
    double box_side = 0.0;
    std::vector<Species> species;
    std::vector<TrajectoryFrame> frames;

    std::vector<int> polymer_ids() const {
        std::vector<int> ids;
        for (std::size_t k = 0; k < species.size(); ++k)
            if (species[k] == Species::Polymer) ids.push_back(static_cast<int>(k));
        return ids;
    }
};

} // namespace topomd
