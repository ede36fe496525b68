#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "topomd/engine.hpp"
#include "topomd/topogen.hpp"

using namespace topomd;

namespace {

SystemState free_bead(double box = 50.0) {
    SystemState s;
    s.box.side = box;
    Bead b;
    b.id = 0;
    b.position = {box / 2, box / 2, box / 2};
    s.beads.push_back(b);
    return s;
}

SystemState small_fluid(int n, double box, std::uint64_t seed) {
    return generate_linear(1, box, static_cast<double>(n) / (box * box * box), seed);
}

bool trajectories_identical(const Trajectory& a, const Trajectory& b) {
    if (a.frames.size() != b.frames.size()) return false;
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
        if (a.frames[f].step != b.frames[f].step) return false;
        for (std::size_t k = 0; k < a.frames[f].unwrapped.size(); ++k)
            if (!(a.frames[f].unwrapped[k] == b.frames[f].unwrapped[k])) return false;
    }
    return true;
}

} // namespace

TEST_CASE("velocity initialization") {
    SUBCASE("chi-square bounds at T = 1") {
        SystemState s = small_fluid(1000, 12.0, 5);
        Rng rng(17);
        initialize_velocities(s, 1.0, rng);
        CHECK(kinetic_temperature(s) == doctest::Approx(1.0).epsilon(0.1));
        Vec3 p{};
        for (const auto& b : s.beads) p += b.mass * b.velocity;
        CHECK(norm(p) < 1e-10);
    }
    SUBCASE("single bead: momentum removal zeroes the velocity") {
        SystemState s = free_bead();
        Rng rng(17);
        initialize_velocities(s, 1.0, rng);
        CHECK(norm(s.beads[0].velocity) == 0.0);
    }
    SUBCASE("deterministic") {
        SystemState a = small_fluid(50, 10.0, 5);
        SystemState b = small_fluid(50, 10.0, 5);
        Rng r1(9);
        Rng r2(9);
        initialize_velocities(a, 1.0, r1);
        initialize_velocities(b, 1.0, r2);
        for (std::size_t k = 0; k < a.beads.size(); ++k)
            CHECK(a.beads[k].velocity == b.beads[k].velocity);
    }
}

TEST_CASE("langevin damping at T = 0 follows (1 - gamma dt)^k") {
    SystemState s = free_bead();
    s.beads[0].velocity = {1.0, 0.0, 0.0};
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;
    th.T = 1e-300;  // noise amplitude is effectively zero
    th.gamma = 1.0;
    const double dt = 0.01;
    Simulation sim(s, InteractionParams{}, FeneParams{}, th, dt, Rng(1));
    for (int k = 1; k <= 200; ++k) {
        sim.step();
        const double expect = std::pow(1.0 - th.gamma * dt, k);
        CHECK(sim.state().beads[0].velocity.x ==
              doctest::Approx(expect).epsilon(1e-3));
        CHECK(sim.state().beads[0].velocity.y == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("langevin step is deterministic for a fixed seed") {
    auto s = generate_linear(8, 10.0, 0.1, 21);
    Rng r1(5);
    Rng r2(5);
    const auto a = step_langevin(s, InteractionParams{}, FeneParams{}, 0.01, 1.0, 1.0, r1);
    const auto b = step_langevin(s, InteractionParams{}, FeneParams{}, 0.01, 1.0, 1.0, r2);
    for (std::size_t k = 0; k < a.beads.size(); ++k) {
        CHECK(a.beads[k].position == b.beads[k].position);
        CHECK(a.beads[k].velocity == b.beads[k].velocity);
    }
    CHECK(a.step == s.step + 1);
}

TEST_CASE("nose-hoover fixed point: sum m v^2 == g T leaves xi at rest") {
    SystemState s;
    s.box.side = 20.0;
    // 4 isolated beads, speeds chosen so sum m v^2 = 3 n T exactly
    for (int k = 0; k < 4; ++k) {
        Bead b;
        b.id = k;
        b.position = {2.0 + 4.0 * k, 10.0, 10.0};
        b.velocity = {std::sqrt(3.0) * (k % 2 == 0 ? 1.0 : -1.0), 0.0, 0.0};
        s.beads.push_back(b);
    }
    InteractionParams params;
    params.eps_pp = 0.0;  // free streaming
    const auto [next, nh] =
        step_nose_hoover(s, NoseHooverState{}, params, FeneParams{}, 0.005, 1.0, 1.2);
    CHECK(nh.xi == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(norm(next.beads[0].velocity) ==
          doctest::Approx(norm(s.beads[0].velocity)).epsilon(1e-12));
}

TEST_CASE("nose-hoover hot start: xi grows and velocities shrink") {
    SystemState s;
    s.box.side = 20.0;
    for (int k = 0; k < 8; ++k) {
        Bead b;
        b.id = k;
        b.position = {2.0 + 2.0 * k, 10.0, 10.0};
        b.velocity = {std::sqrt(6.0), 0.0, 0.0};  // T_kin = 2, target 1
        s.beads.push_back(b);
    }
    InteractionParams params;
    params.eps_pp = 0.0;
    NoseHooverState nh;
    SystemState cur = s;
    for (int k = 0; k < 50; ++k) {
        auto [next, nh2] =
            step_nose_hoover(cur, nh, params, FeneParams{}, 0.005, 1.0, 2.4);
        cur = next;
        nh = nh2;
    }
    CHECK(nh.xi > 0.0);
    CHECK(kinetic_temperature(cur) < 2.0);
}

TEST_CASE("run produces the dump schedule and extends seamlessly") {
    auto s = generate_linear(5, 10.0, 0.0, 3);
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;

    SUBCASE("zero steps yields the single initial frame") {
        RunSpec rs;
        rs.steps = 0;
        rs.dump_every = 10;
        rs.seed = 4;
        const auto [fin, traj] = run(s, InteractionParams{}, FeneParams{}, th, rs);
        CHECK(traj.frames.size() == 1);
        CHECK(traj.frames[0].step == 0);
        CHECK(fin.step == 0);
    }
    SUBCASE("frames at every dump interval plus the final step") {
        RunSpec rs;
        rs.steps = 55;
        rs.dump_every = 20;
        rs.seed = 4;
        const auto [fin, traj] = run(s, InteractionParams{}, FeneParams{}, th, rs);
        REQUIRE(traj.frames.size() == 4);
        CHECK(traj.frames[0].step == 0);
        CHECK(traj.frames[1].step == 20);
        CHECK(traj.frames[2].step == 40);
        CHECK(traj.frames[3].step == 55);
        CHECK(fin.step == 55);
    }
    SUBCASE("same spec and seed give bitwise-identical trajectories") {
        RunSpec rs;
        rs.steps = 40;
        rs.dump_every = 10;
        rs.seed = 4;
        const auto [f1, t1] = run(s, InteractionParams{}, FeneParams{}, th, rs);
        const auto [f2, t2] = run(s, InteractionParams{}, FeneParams{}, th, rs);
        CHECK(trajectories_identical(t1, t2));
    }
}

TEST_CASE("continuation oracle: run(a+b) equals run(a) then extend(b)") {
    auto s = generate_linear(6, 10.0, 0.05, 13);
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;

    Simulation whole(s, InteractionParams{}, FeneParams{}, th, 0.01, Rng(7, 2));
    whole.run(300, 50);

    Simulation split(s, InteractionParams{}, FeneParams{}, th, 0.01, Rng(7, 2));
    split.run(180, 50);
    split.extend(120);

    CHECK(whole.state().step == 300);
    CHECK(split.state().step == 300);
    for (std::size_t k = 0; k < whole.state().beads.size(); ++k) {
        CHECK(whole.state().beads[k].position == split.state().beads[k].position);
        CHECK(whole.state().beads[k].velocity == split.state().beads[k].velocity);
    }
}

TEST_CASE("nose-hoover continuation carries xi") {
    auto s = generate_linear(6, 10.0, 0.05, 13);
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::NoseHoover;

    Simulation whole(s, InteractionParams{}, FeneParams{}, th, 0.01, Rng(7, 2));
    whole.run(200, 50);

    Simulation split(s, InteractionParams{}, FeneParams{}, th, 0.01, Rng(7, 2));
    split.run(120, 50);
    split.extend(80);

    CHECK(whole.nose_hoover().xi == split.nose_hoover().xi);
    for (std::size_t k = 0; k < whole.state().beads.size(); ++k)
        CHECK(whole.state().beads[k].position == split.state().beads[k].position);
}

TEST_CASE("extend tracks step counters") {
    auto s = generate_linear(4, 10.0, 0.0, 3);
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;
    Simulation sim(s, InteractionParams{}, FeneParams{}, th, 0.01, Rng(2, 2));
    sim.run(500, 100);
    CHECK(sim.state().step == 500);

    SUBCASE("extend by zero changes nothing") {
        const auto before = sim.trajectory().frames.size();
        sim.extend(0);
        CHECK(sim.state().step == 500);
        CHECK(sim.trajectory().frames.size() == before);
    }
    SUBCASE("50k + 40k pattern at test scale: 500 + 400 ends at 900") {
        sim.extend(400);
        CHECK(sim.state().step == 900);
        CHECK(sim.trajectory().frames.back().step == 900);
        // frame steps strictly increase across the extension
        const auto& frames = sim.trajectory().frames;
        for (std::size_t k = 1; k < frames.size(); ++k)
            CHECK(frames[k].step > frames[k - 1].step);
    }
}

TEST_CASE("extend_run rejects mismatched state and trajectory") {
    auto s = generate_linear(4, 10.0, 0.0, 3);
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;
    const auto [fin, traj] = run(s, InteractionParams{}, FeneParams{}, th,
                                 RunSpec{100, 0.01, 50, 3});
    SystemState stale = s;  // still at step 0
    CHECK_THROWS_AS(extend_run(stale, traj, 10, InteractionParams{}, FeneParams{}, th,
                               0.01, 50, Rng(3, 2)),
                    Error);
    const auto [fin2, traj2] = extend_run(fin, traj, 60, InteractionParams{},
                                          FeneParams{}, th, 0.01, 50, Rng(3, 3));
    CHECK(fin2.step == 160);
    CHECK(traj2.frames.back().step == 160);
}

TEST_CASE("NVE mode conserves energy at short horizons") {
    // smoke-scale version of the acceptance drift criterion
    auto s = generate_linear(1, 8.0, 0.3, 41);
    ThermostatSpec langevin;
    langevin.kind = ThermostatSpec::Kind::Langevin;
    Simulation warm(s, InteractionParams{}, FeneParams{}, langevin, 0.005, Rng(6, 2));
    warm.run(500, 500);

    ThermostatSpec none;
    none.kind = ThermostatSpec::Kind::None;
    Simulation nve(warm.state(), InteractionParams{}, FeneParams{}, none, 0.005,
                   Rng(0));
    nve.step();  // prime the energy bookkeeping
    const double e0 = nve.potential_energy() + nve.kinetic_energy();
    double max_dev = 0.0;
    for (int k = 0; k < 1000; ++k) {
        nve.step();
        const double e = nve.potential_energy() + nve.kinetic_energy();
        max_dev = std::max(max_dev, std::abs(e - e0));
    }
    const double n = static_cast<double>(nve.state().beads.size());
    CHECK(max_dev / n < 1e-3);
}

TEST_CASE("overstretch during a run names the step and bead") {
    // two bonded beads given opposite outward velocities, no thermostat
    SystemState s;
    s.box.side = 10.0;
    for (int k = 0; k < 2; ++k) {
        Bead b;
        b.id = k;
        b.position = {4.0 + k * 1.0, 5.0, 5.0};
        b.velocity = {k == 0 ? -30.0 : 30.0, 0.0, 0.0};
        s.beads.push_back(b);
    }
    s.bonds = {{0, 1}};
    s.topology.backbone = {0, 1};
    ThermostatSpec none;
    none.kind = ThermostatSpec::Kind::None;
    Simulation sim(s, InteractionParams{}, FeneParams{}, none, 0.01, Rng(0));
    CHECK_THROWS_AS(sim.run(100, 10), OverstretchError);
}
