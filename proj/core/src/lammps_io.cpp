#include "topomd/lammps_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace topomd {

namespace {

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    return is;
}

/// Line reader tracking numbers for error reporting.
class LineReader {
public:
    explicit LineReader(std::istream& is) : is_(is) {}

    bool next(std::string& line) {
        while (std::getline(is_, line)) {
            ++lineno_;
            return true;
        }
        return false;
    }

    /// Next line that is not blank.
    bool next_content(std::string& line) {
        while (next(line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    }

    int lineno() const { return lineno_; }

private:
    std::istream& is_;
    int lineno_ = 0;
};

[[noreturn]] void parse_fail(const std::string& what, int lineno) {
    throw Error(what + " (line " + std::to_string(lineno) + ")");
}

} // namespace

void write_lammps_data(const SystemState& state, std::ostream& os) {
    os << "data file generated by topomd\n\n";
    os << state.beads.size() << " atoms\n";
    os << state.bonds.size() << " bonds\n";
    os << "2 atom types\n";
    os << "1 bond types\n\n";
    const std::string hi = fmt_g17(state.box.side);
    os << "0 " << hi << " xlo xhi\n";
    os << "0 " << hi << " ylo yhi\n";
    os << "0 " << hi << " zlo zhi\n\n";
    os << "Masses\n\n1 1\n2 1\n\n";
    os << "Atoms\n\n";
    for (const auto& b : state.beads) {
        const int type = b.species == Species::Polymer ? 1 : 2;
        const int mol = b.species == Species::Polymer ? 1 : 0;
        os << b.id + 1 << ' ' << mol << ' ' << type << ' ' << fmt_g17(b.position.x)
           << ' ' << fmt_g17(b.position.y) << ' ' << fmt_g17(b.position.z) << ' '
           << b.image[0] << ' ' << b.image[1] << ' ' << b.image[2] << '\n';
    }
    os << "\nVelocities\n\n";
    for (const auto& b : state.beads)
        os << b.id + 1 << ' ' << fmt_g17(b.velocity.x) << ' ' << fmt_g17(b.velocity.y)
           << ' ' << fmt_g17(b.velocity.z) << '\n';
    if (!state.bonds.empty()) {
        os << "\nBonds\n\n";
        int id = 1;
        for (const auto& bond : state.bonds)
            os << id++ << " 1 " << bond.i + 1 << ' ' << bond.j + 1 << '\n';
    }
}

void write_lammps_data(const SystemState& state, const std::string& path) {
    auto os = open_out(path);
    write_lammps_data(state, os);
}

SystemState read_lammps_data(std::istream& is) {
    LineReader reader(is);
    std::string line;
    if (!reader.next(line)) throw Error("empty data file");

    long n_atoms = -1;
    long n_bonds = -1;
    double box_hi = 0.0;
    bool have_box = false;
    SystemState state;
    std::vector<bool> seen_atom;
    long atoms_read = 0;
    long velocities_read = 0;
    long bonds_read = 0;

    auto require_counts = [&](const std::string& section, int lineno) {
        if (n_atoms < 0) parse_fail(section + " section before atom count", lineno);
    };

    while (reader.next_content(line)) {
        std::istringstream ls(line);
        std::string first;
        ls >> first;

        if (first == "Masses") {
            require_counts("Masses", reader.lineno());
            for (int k = 0; k < 2; ++k) {
                if (!reader.next_content(line))
                    parse_fail("Masses section truncated", reader.lineno());
                std::istringstream ms(line);
                int type = 0;
                double mass = 0.0;
                if (!(ms >> type >> mass) || mass != 1.0)
                    parse_fail("bad Masses entry '" + line + "'", reader.lineno());
            }
            continue;
        }
        if (first == "Atoms") {
            require_counts("Atoms", reader.lineno());
            state.beads.assign(static_cast<std::size_t>(n_atoms), Bead{});
            seen_atom.assign(static_cast<std::size_t>(n_atoms), false);
            for (long k = 0; k < n_atoms; ++k) {
                if (!reader.next_content(line))
                    parse_fail("Atoms section ended after " + std::to_string(k) +
                                   " of " + std::to_string(n_atoms) + " rows",
                               reader.lineno());
                std::istringstream as(line);
                long id = 0;
                long mol = 0;
                int type = 0;
                Vec3 p;
                if (!(as >> id >> mol >> type >> p.x >> p.y >> p.z))
                    parse_fail("bad Atoms entry '" + line + "'", reader.lineno());
                if (id < 1 || id > n_atoms)
                    parse_fail("atom id " + std::to_string(id) + " out of range",
                               reader.lineno());
                Bead& bead = state.beads[static_cast<std::size_t>(id - 1)];
                if (seen_atom[static_cast<std::size_t>(id - 1)])
                    parse_fail("duplicate atom id " + std::to_string(id), reader.lineno());
                seen_atom[static_cast<std::size_t>(id - 1)] = true;
                bead.id = static_cast<int>(id - 1);
                if (type != 1 && type != 2)
                    parse_fail("unknown atom type " + std::to_string(type),
                               reader.lineno());
                bead.species = type == 1 ? Species::Polymer : Species::Solvent;
                bead.position = p;
                int ix = 0;
                int iy = 0;
                int iz = 0;
                if (as >> ix >> iy >> iz) bead.image = {ix, iy, iz};
                ++atoms_read;
            }
            continue;
        }
        if (first == "Velocities") {
            require_counts("Velocities", reader.lineno());
            if (atoms_read != n_atoms)
                parse_fail("Velocities section before Atoms", reader.lineno());
            for (long k = 0; k < n_atoms; ++k) {
                if (!reader.next_content(line))
                    parse_fail("Velocities section ended after " + std::to_string(k) +
                                   " of " + std::to_string(n_atoms) + " rows",
                               reader.lineno());
                std::istringstream vs(line);
                long id = 0;
                Vec3 v;
                if (!(vs >> id >> v.x >> v.y >> v.z) || id < 1 || id > n_atoms)
                    parse_fail("bad Velocities entry '" + line + "'", reader.lineno());
                state.beads[static_cast<std::size_t>(id - 1)].velocity = v;
                ++velocities_read;
            }
            continue;
        }
        if (first == "Bonds") {
            require_counts("Bonds", reader.lineno());
            if (n_bonds < 0) parse_fail("Bonds section before bond count", reader.lineno());
            for (long k = 0; k < n_bonds; ++k) {
                if (!reader.next_content(line))
                    parse_fail("Bonds section ended after " + std::to_string(k) +
                                   " of " + std::to_string(n_bonds) + " rows",
                               reader.lineno());
                std::istringstream bs(line);
                long id = 0;
                int type = 0;
                long i = 0;
                long j = 0;
                if (!(bs >> id >> type >> i >> j) || i < 1 || j < 1 || i > n_atoms ||
                    j > n_atoms)
                    parse_fail("bad Bonds entry '" + line + "'", reader.lineno());
                state.bonds.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
                ++bonds_read;
            }
            continue;
        }

        // Header lines: "<n> atoms", "<n> bonds", "<n> atom types",
        // "<n> bond types", "<lo> <hi> xlo xhi" and friends.
        std::istringstream hs(line);
        double a = 0.0;
        if (!(hs >> a)) parse_fail("unrecognized line '" + line + "'", reader.lineno());
        std::string tok2;
        hs >> tok2;
        if (tok2 == "atoms") {
            n_atoms = static_cast<long>(a);
        } else if (tok2 == "bonds") {
            n_bonds = static_cast<long>(a);
        } else if (tok2 == "atom" || tok2 == "bond") {
            std::string tok3;
            hs >> tok3;
            if (tok3 != "types")
                parse_fail("unrecognized line '" + line + "'", reader.lineno());
        } else {
            double hi = 0.0;
            std::istringstream bs(line);
            std::string lo_tag;
            std::string hi_tag;
            if (!(bs >> a >> hi >> lo_tag >> hi_tag))
                parse_fail("unrecognized line '" + line + "'", reader.lineno());
            if (lo_tag == "xlo" || lo_tag == "ylo" || lo_tag == "zlo") {
                if (a != 0.0)
                    parse_fail("box lower bound must be 0", reader.lineno());
                box_hi = hi;
                have_box = true;
            } else {
                parse_fail("unrecognized line '" + line + "'", reader.lineno());
            }
        }
    }

    if (n_atoms < 0) throw Error("data file missing atom count");
    if (!have_box) throw Error("data file missing box bounds");
    if (atoms_read != n_atoms)
        throw Error("data file missing Atoms section or wrong row count");
    if (n_bonds > 0 && bonds_read != n_bonds)
        throw Error("data file Bonds count mismatch: header says " +
                    std::to_string(n_bonds) + ", section has " +
                    std::to_string(bonds_read));
    state.box.side = box_hi;
    return state;
}

SystemState read_lammps_data(const std::string& path) {
    auto is = open_in(path);
    return read_lammps_data(is);
}

namespace {

void write_id_list(std::ostream& os, const std::string& key,
                   const std::vector<int>& ids) {
    os << key;
    for (int id : ids) os << ' ' << id;
    os << '\n';
}

std::vector<int> parse_id_list(std::istringstream& ls) {
    std::vector<int> ids;
    int v = 0;
    while (ls >> v) ids.push_back(v);
    return ids;
}

} // namespace

void write_topology(const Topology& topology, const std::string& path) {
    auto os = open_out(path);
    os << "# topomd topology v1\n";
    os << "architecture " << to_string(topology.architecture) << '\n';
    if (!topology.backbone.empty()) write_id_list(os, "backbone", topology.backbone);
    for (const auto& arm : topology.arms) write_id_list(os, "arm", arm);
    if (!topology.generations.empty())
        write_id_list(os, "generations", topology.generations);
    if (!topology.graft_points.empty())
        write_id_list(os, "graft_points", topology.graft_points);
}

Topology read_topology(const std::string& path) {
    auto is = open_in(path);
    Topology topo;
    std::string line;
    bool have_arch = false;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "architecture") {
            std::string value;
            ls >> value;
            topo.architecture = architecture_from_string(value);
            have_arch = true;
        } else if (key == "backbone") {
            topo.backbone = parse_id_list(ls);
        } else if (key == "arm") {
            topo.arms.push_back(parse_id_list(ls));
        } else if (key == "generations") {
            topo.generations = parse_id_list(ls);
        } else if (key == "graft_points") {
            topo.graft_points = parse_id_list(ls);
        } else {
            throw Error("unknown topology key '" + key + "' (line " +
                        std::to_string(lineno) + ")");
        }
    }
    if (!have_arch) throw Error("topology file missing architecture");
    return topo;
}

void write_dump_frame(std::ostream& os, const TrajectoryFrame& frame,
                      const std::vector<Species>& species, double box_side) {
    os << "ITEM: TIMESTEP\n" << frame.step << '\n';
    os << "ITEM: NUMBER OF ATOMS\n" << frame.unwrapped.size() << '\n';
    os << "ITEM: BOX BOUNDS pp pp pp\n";
    const std::string hi = fmt_g17(box_side);
    for (int k = 0; k < 3; ++k) os << "0 " << hi << '\n';
    os << "ITEM: ATOMS id type xu yu zu\n";
    for (std::size_t k = 0; k < frame.unwrapped.size(); ++k) {
        const int type = species[k] == Species::Polymer ? 1 : 2;
        const Vec3& p = frame.unwrapped[k];
        os << k + 1 << ' ' << type << ' ' << fmt_g17(p.x) << ' ' << fmt_g17(p.y) << ' '
           << fmt_g17(p.z) << '\n';
    }
}

void write_dump(const Trajectory& trajectory, const std::string& path) {
    auto os = open_out(path);
    for (const auto& frame : trajectory.frames)
        write_dump_frame(os, frame, trajectory.species, trajectory.box_side);
}

Trajectory read_dump(std::istream& is) {
    Trajectory traj;
    LineReader reader(is);
    std::string line;
    int frame_index = 0;

    auto frame_fail = [&](const std::string& what) {
        throw Error("dump frame " + std::to_string(frame_index) + ": " + what +
                    " (line " + std::to_string(reader.lineno()) + ")");
    };

    while (reader.next_content(line)) {
        if (line.rfind("ITEM: TIMESTEP", 0) != 0) frame_fail("expected ITEM: TIMESTEP");
        TrajectoryFrame frame;
        if (!reader.next_content(line)) frame_fail("missing timestep value");
        frame.step = std::stol(line);

        if (!reader.next_content(line) || line.rfind("ITEM: NUMBER OF ATOMS", 0) != 0)
            frame_fail("expected ITEM: NUMBER OF ATOMS");
        if (!reader.next_content(line)) frame_fail("missing atom count");
        const long n = std::stol(line);

        if (!reader.next_content(line) || line.rfind("ITEM: BOX BOUNDS", 0) != 0)
            frame_fail("expected ITEM: BOX BOUNDS");
        double box_hi = 0.0;
        for (int k = 0; k < 3; ++k) {
            if (!reader.next_content(line)) frame_fail("missing box bound line");
            std::istringstream bs(line);
            double lo = 0.0;
            double hi = 0.0;
            if (!(bs >> lo >> hi)) frame_fail("bad box bound line '" + line + "'");
            box_hi = hi - lo;
        }

        if (!reader.next_content(line) || line.rfind("ITEM: ATOMS", 0) != 0)
            frame_fail("expected ITEM: ATOMS");
        frame.unwrapped.assign(static_cast<std::size_t>(n), Vec3{});
        std::vector<Species> species(static_cast<std::size_t>(n), Species::Polymer);
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (long k = 0; k < n; ++k) {
            if (!reader.next_content(line))
                frame_fail("truncated after " + std::to_string(k) + " of " +
                           std::to_string(n) + " atoms");
            std::istringstream as(line);
            long id = 0;
            int type = 0;
            Vec3 p;
            if (!(as >> id >> type >> p.x >> p.y >> p.z) || id < 1 || id > n)
                frame_fail("bad atom line '" + line + "'");
            if (seen[static_cast<std::size_t>(id - 1)])
                frame_fail("duplicate atom id " + std::to_string(id));
            seen[static_cast<std::size_t>(id - 1)] = true;
            frame.unwrapped[static_cast<std::size_t>(id - 1)] = p;
            species[static_cast<std::size_t>(id - 1)] =
                type == 1 ? Species::Polymer : Species::Solvent;
        }

        if (traj.frames.empty()) {
            traj.box_side = box_hi;
            traj.species = species;
        } else {
            if (species.size() != traj.species.size())
                frame_fail("atom count differs from first frame");
            if (frame.step <= traj.frames.back().step)
                frame_fail("frame steps not strictly increasing");
        }
        traj.frames.push_back(std::move(frame));
        ++frame_index;
    }
    return traj;
}

Trajectory read_dump(const std::string& path) {
    auto is = open_in(path);
    return read_dump(is);
}

} // namespace topomd
