#pragma once

#include <iosfwd>
#include <string>

#include "topomd/system.hpp"
#include "topomd/trajectory.hpp"

namespace topomd {

/// Write the standard text data file: header counts, box bounds, Masses,
/// Atoms (molecular style with image flags), Velocities and Bonds
/// sections. Numeric fields carry 17 significant digits so a read/write
/// cycle is byte identical.
void write_lammps_data(const SystemState& state, const std::string& path);
void write_lammps_data(const SystemState& state, std::ostream& os);

/// Inverse of the writer. Section order is free; counts are validated and
/// malformed content is reported with line numbers. The returned state
/// carries no topology annotations (see the sidecar functions).
SystemState read_lammps_data(const std::string& path);
SystemState read_lammps_data(std::istream& is);

/// Topology annotations are not expressible in the data format; they
/// travel in a sidecar text file next to it.
void write_topology(const Topology& topology, const std::string& path);
Topology read_topology(const std::string& path);

/// Text dump: per frame ITEM: TIMESTEP / NUMBER OF ATOMS /
/// BOX BOUNDS pp pp pp / ATOMS id type xu yu zu, unwrapped coordinates.
void write_dump(const Trajectory& trajectory, const std::string& path);
void write_dump_frame(std::ostream& os, const TrajectoryFrame& frame,
                      const std::vector<Species>& species, double box_side);

/// Read every frame of a dump file in order. Atom lines may be shuffled;
/// beads are reordered by id. Truncated frames report the frame index.
Trajectory read_dump(const std::string& path);
Trajectory read_dump(std::istream& is);

} // namespace topomd
