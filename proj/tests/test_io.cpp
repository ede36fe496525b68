#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "topomd/engine.hpp"
#include "topomd/lammps_io.hpp"
#include "topomd/plot.hpp"
#include "topomd/report.hpp"
#include "topomd/topogen.hpp"

using namespace topomd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string tmp_dir() {
    const auto dir = fs::temp_directory_path() / "topomd_io_test";
    fs::create_directories(dir);
    return dir.string();
}

SystemState sample_state() {
    auto s = generate_star(3, 4, 12.0, 0.02, 9);
    Rng rng(5);
    initialize_velocities(s, 1.0, rng);
    return s;
}

bool states_equal(const SystemState& a, const SystemState& b) {
    if (a.beads.size() != b.beads.size() || a.bonds.size() != b.bonds.size())
        return false;
    if (a.box.side != b.box.side) return false;
    for (std::size_t k = 0; k < a.beads.size(); ++k) {
        const auto& x = a.beads[k];
        const auto& y = b.beads[k];
        if (!(x.position == y.position) || !(x.velocity == y.velocity)) return false;
        if (x.image != y.image || x.species != y.species) return false;
    }
    for (std::size_t k = 0; k < a.bonds.size(); ++k)
        if (a.bonds[k].i != b.bonds[k].i || a.bonds[k].j != b.bonds[k].j) return false;
    return true;
}

} // namespace

TEST_CASE("data file round trip is byte identical") {
    const auto dir = tmp_dir();
    const auto s = sample_state();
    const auto p1 = dir + "/a.data";
    const auto p2 = dir + "/b.data";
    write_lammps_data(s, p1);
    const auto back = read_lammps_data(p1);
    CHECK(states_equal(s, back));
    write_lammps_data(back, p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("data header counts") {
    std::ostringstream os;
    SystemState single;
    single.box.side = 10.0;
    Bead b;
    b.id = 0;
    b.position = {5, 5, 5};
    single.beads.push_back(b);
    write_lammps_data(single, os);
    const auto text = os.str();
    CHECK(text.find("1 atoms\n") != std::string::npos);
    CHECK(text.find("0 bonds\n") != std::string::npos);
    CHECK(text.find("2 atom types\n") != std::string::npos);
    CHECK(text.find("1 bond types\n") != std::string::npos);

    std::ostringstream os2;
    write_lammps_data(generate_star(5, 6, 20.0, 0.0, 3), os2);
    CHECK(os2.str().find("31 atoms\n") != std::string::npos);
    CHECK(os2.str().find("30 bonds\n") != std::string::npos);
}

TEST_CASE("data reader accepts permuted sections") {
    const auto dir = tmp_dir();
    const auto s = sample_state();
    const auto p1 = dir + "/perm_src.data";
    write_lammps_data(s, p1);

    // move the Bonds section before Atoms wholesale
    const std::string text = slurp(p1);
    const auto atoms_at = text.find("Atoms");
    const auto bonds_at = text.find("Bonds");
    REQUIRE(atoms_at != std::string::npos);
    REQUIRE(bonds_at != std::string::npos);
    const std::string head = text.substr(0, atoms_at);
    const std::string mid = text.substr(atoms_at, bonds_at - atoms_at);
    const std::string bonds = text.substr(bonds_at);
    std::ofstream(dir + "/perm.data") << head << bonds << "\n" << mid;

    const auto back = read_lammps_data(dir + "/perm.data");
    CHECK(states_equal(s, back));
}

TEST_CASE("data reader reports malformed input with line numbers") {
    const auto dir = tmp_dir();
    SUBCASE("count mismatch names the section") {
        std::ofstream(dir + "/bad1.data")
            << "header\n\n3 atoms\n0 bonds\n2 atom types\n1 bond types\n\n"
            << "0 10 xlo xhi\n0 10 ylo yhi\n0 10 zlo zhi\n\n"
            << "Atoms\n\n1 1 1 1.0 1.0 1.0\n2 1 1 2.0 2.0 2.0\n";
        try {
            read_lammps_data(dir + "/bad1.data");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("Atoms") != std::string::npos);
        }
    }
    SUBCASE("garbage line is rejected with its number") {
        std::ofstream(dir + "/bad2.data")
            << "header\n\n1 atoms\nwhat is this\n";
        try {
            read_lammps_data(dir + "/bad2.data");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        }
    }
}

TEST_CASE("topology sidecar round trips every architecture") {
    const auto dir = tmp_dir();
    for (int arch = 0; arch < 5; ++arch) {
        SystemState s;
        switch (arch) {
            case 0: s = generate_linear(6, 10.0, 0.0, 1); break;
            case 1: s = generate_ring(6, 10.0, 0.0, 1); break;
            case 2: s = generate_brush(6, 0.5, 2, 10.0, 0.0, 1); break;
            case 3: s = generate_star(3, 3, 10.0, 0.0, 1); break;
            default: s = generate_dendrimer(2, 2, 1, 10.0, 0.0, 1); break;
        }
        const auto path = dir + "/t" + std::to_string(arch) + ".topo";
        write_topology(s.topology, path);
        const auto back = read_topology(path);
        CHECK(back.architecture == s.topology.architecture);
        CHECK(back.backbone == s.topology.backbone);
        CHECK(back.arms == s.topology.arms);
        CHECK(back.generations == s.topology.generations);
        CHECK(back.graft_points == s.topology.graft_points);
    }
}

TEST_CASE("dump round trip") {
    const auto dir = tmp_dir();
    auto s = generate_linear(5, 10.0, 0.05, 7);
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;
    const auto [fin, traj] = run(s, InteractionParams{}, FeneParams{}, th,
                                 RunSpec{120, 0.01, 40, 7});
    const auto p1 = dir + "/a.dump";
    const auto p2 = dir + "/b.dump";
    write_dump(traj, p1);
    const auto back = read_dump(p1);
    REQUIRE(back.frames.size() == traj.frames.size());
    CHECK(back.box_side == traj.box_side);
    CHECK(back.species == traj.species);
    for (std::size_t f = 0; f < traj.frames.size(); ++f) {
        CHECK(back.frames[f].step == traj.frames[f].step);
        for (std::size_t k = 0; k < traj.frames[f].unwrapped.size(); ++k)
            CHECK(back.frames[f].unwrapped[k] == traj.frames[f].unwrapped[k]);
    }
    write_dump(back, p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("dump reader handles shuffled ids and rejects truncation") {
    const auto dir = tmp_dir();
    SUBCASE("shuffled atom lines are reordered by id") {
        std::ofstream(dir + "/s.dump")
            << "ITEM: TIMESTEP\n0\nITEM: NUMBER OF ATOMS\n3\n"
            << "ITEM: BOX BOUNDS pp pp pp\n0 5\n0 5\n0 5\n"
            << "ITEM: ATOMS id type xu yu zu\n"
            << "3 2 3.0 3.0 3.0\n1 1 1.0 1.0 1.0\n2 1 2.0 2.0 2.0\n";
        const auto traj = read_dump(dir + "/s.dump");
        REQUIRE(traj.frames.size() == 1);
        CHECK(traj.frames[0].unwrapped[0].x == 1.0);
        CHECK(traj.frames[0].unwrapped[1].x == 2.0);
        CHECK(traj.frames[0].unwrapped[2].x == 3.0);
        CHECK(traj.species[2] == Species::Solvent);
    }
    SUBCASE("truncated frame reports its index") {
        std::ofstream(dir + "/t.dump")
            << "ITEM: TIMESTEP\n0\nITEM: NUMBER OF ATOMS\n2\n"
            << "ITEM: BOX BOUNDS pp pp pp\n0 5\n0 5\n0 5\n"
            << "ITEM: ATOMS id type xu yu zu\n"
            << "1 1 1.0 1.0 1.0\n2 1 2.0 2.0 2.0\n"
            << "ITEM: TIMESTEP\n10\nITEM: NUMBER OF ATOMS\n2\n"
            << "ITEM: BOX BOUNDS pp pp pp\n0 5\n0 5\n0 5\n"
            << "ITEM: ATOMS id type xu yu zu\n"
            << "1 1 1.0 1.0 1.0\n";
        try {
            read_dump(dir + "/t.dump");
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("frame 1") != std::string::npos);
        }
    }
    SUBCASE("three frames arrive in order") {
        auto s = generate_linear(3, 10.0, 0.0, 2);
        ThermostatSpec th;
        th.kind = ThermostatSpec::Kind::Langevin;
        const auto [fin, traj] = run(s, InteractionParams{}, FeneParams{}, th,
                                     RunSpec{100, 0.01, 50, 2});
        write_dump(traj, dir + "/three.dump");
        const auto back = read_dump(dir + "/three.dump");
        REQUIRE(back.frames.size() == 3);
        CHECK(back.frames[0].step == 0);
        CHECK(back.frames[1].step == 50);
        CHECK(back.frames[2].step == 100);
    }
}

TEST_CASE("golden files freeze the data and dump dialects") {
    const std::string golden = TOPOMD_TEST_DATA_DIR;
    const auto dir = tmp_dir();

    auto s = generate_brush(6, 0.5, 2, 10.0, 0.05, 123);
    write_lammps_data(s, dir + "/golden.data");
    CHECK(slurp(dir + "/golden.data") == slurp(golden + "/brush_6_0.5_2.data"));

    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;
    const auto [fin, traj] = run(s, InteractionParams{}, FeneParams{}, th,
                                 RunSpec{20, 0.01, 10, 123});
    write_dump(traj, dir + "/golden.dump");
    CHECK(slurp(dir + "/golden.dump") == slurp(golden + "/brush_6_0.5_2.dump"));
}

TEST_CASE("plot emission") {
    const auto dir = tmp_dir();
    SUBCASE("empty input is an error") {
        CHECK_THROWS_AS(emit_plot({}, PlotKind::Line, {}, dir + "/x.svg"), Error);
        CHECK_THROWS_AS(emit_plot({{"s", {}, {}}}, PlotKind::Line, {}, dir + "/x.svg"),
                        Error);
    }
    SUBCASE("series plus data file") {
        PlotSeries s{"Rg^2", {0, 1, 2, 3}, {1.0, 1.2, 1.1, 1.3}};
        emit_plot({s}, PlotKind::Line, {"Radius of gyration", "step", "Rg^2"},
                  dir + "/rg2.svg");
        CHECK(fs::exists(dir + "/rg2.svg"));
        CHECK(fs::exists(dir + "/rg2.tsv"));
        const auto tsv = slurp(dir + "/rg2.tsv");
        CHECK(tsv.find("# series\tx\ty\n") == 0);
        CHECK(tsv.find("Rg^2\t0\t1\n") != std::string::npos);
        const auto svg = slurp(dir + "/rg2.svg");
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("polyline") != std::string::npos);
    }
    SUBCASE("loglog rejects nonpositive values naming the index") {
        PlotSeries s{"P(q)", {0.1, 1.0, 10.0}, {1.0, -0.5, 0.2}};
        try {
            emit_plot({s}, PlotKind::LogLog, {}, dir + "/pq.svg");
            FAIL("expected an error");
        } catch (const Error& e) {
            const std::string msg = e.what();
            CHECK(msg.find("index 1") != std::string::npos);
            CHECK(msg.find("P(q)") != std::string::npos);
        }
    }
    SUBCASE("non-finite values are rejected") {
        PlotSeries s{"bad", {0.0, 1.0}, {1.0, std::nan("")}};
        CHECK_THROWS_AS(emit_plot({s}, PlotKind::Line, {}, dir + "/bad.svg"), Error);
    }
}

TEST_CASE("report writing") {
    const auto dir = tmp_dir() + "/report";
    fs::create_directories(dir + "/plots");
    PlotSeries s{"x", {0, 1}, {0, 1}};
    emit_plot({s}, PlotKind::Line, {}, dir + "/plots/rg2.svg");

    ReportContext ctx;
    ctx.title = "Dendrimer run";
    ctx.narrative = "test narrative";
    ctx.configuration = {{"architecture", "dendrimer"}};
    ctx.parameters = {{"thermostat", "nose-hoover"}};

    ObservableSet obs;
    obs.rg2_mean = 1.5;
    obs.msd.diffusion = 0.25;  // ree_mean and lp left unset, as for a dendrimer

    SUBCASE("dashes for inapplicable observables, exact thermostat name") {
        write_report(ctx, obs, {{"Radius of gyration", "plots/rg2.svg"}},
                     dir + "/report.md");
        const auto text = slurp(dir + "/report.md");
        CHECK(text.find("| mean R_ee | — |") != std::string::npos);
        CHECK(text.find("| l_p | — |") != std::string::npos);
        CHECK(text.find("| mean Rg^2 | 1.5 |") != std::string::npos);
        CHECK(text.find("nose-hoover") != std::string::npos);
        CHECK(text.find("![Radius of gyration](plots/rg2.svg)") != std::string::npos);
    }
    SUBCASE("missing plot file is an error") {
        CHECK_THROWS_AS(write_report(ctx, obs, {{"nope", "plots/missing.svg"}},
                                     dir + "/r2.md"),
                        Error);
    }
    SUBCASE("deterministic output") {
        write_report(ctx, obs, {}, dir + "/r3.md");
        const auto a = slurp(dir + "/r3.md");
        write_report(ctx, obs, {}, dir + "/r3.md");
        CHECK(a == slurp(dir + "/r3.md"));
    }
}
