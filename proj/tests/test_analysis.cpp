#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "topomd/analysis.hpp"
#include "topomd/engine.hpp"
#include "topomd/rng.hpp"
#include "topomd/topogen.hpp"

using namespace topomd;

namespace {

TrajectoryFrame frame_of(long step, std::vector<Vec3> coords) {
    TrajectoryFrame f;
    f.step = step;
    f.unwrapped = std::move(coords);
    return f;
}

std::vector<int> iota_ids(int n) {
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ids[static_cast<std::size_t>(k)] = k;
    return ids;
}

// worm-like test chain: fixed polar angle between consecutive bonds,
// uniform random azimuth, so E[u_i . u_{i+s}] = cos(theta)^s exactly
std::vector<Vec3> wormlike_chain(int n_bonds, double cos_theta, Rng& rng) {
    std::vector<Vec3> pos{{0, 0, 0}};
    Vec3 dir{0, 0, 1};
    pos.push_back(dir);
    const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
    for (int k = 1; k < n_bonds; ++k) {
        // orthonormal frame around the current direction
        Vec3 a = std::abs(dir.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
        Vec3 e1 = cross(dir, a);
        e1 *= 1.0 / norm(e1);
        const Vec3 e2 = cross(dir, e1);
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        dir = cos_theta * dir +
              sin_theta * (std::cos(phi) * e1 + std::sin(phi) * e2);
        dir *= 1.0 / norm(dir);
        pos.push_back(pos.back() + dir);
    }
    return pos;
}

Trajectory random_polymer_trajectory(int n, int n_frames, std::uint64_t seed) {
    Trajectory traj;
    traj.box_side = 20.0;
    traj.species.assign(static_cast<std::size_t>(n), Species::Polymer);
    Rng rng(seed);
    for (int f = 0; f < n_frames; ++f) {
        std::vector<Vec3> coords;
        for (int k = 0; k < n; ++k)
            coords.push_back(
                {rng.uniform(0.0, 8.0), rng.uniform(0.0, 8.0), rng.uniform(0.0, 8.0)});
        traj.frames.push_back(frame_of(f * 100, std::move(coords)));
    }
    return traj;
}

Vec3 rotate_z(const Vec3& p, double a) {
    return {p.x * std::cos(a) - p.y * std::sin(a),
            p.x * std::sin(a) + p.y * std::cos(a), p.z};
}

} // namespace

TEST_CASE("radius of gyration") {
    CHECK(radius_of_gyration_sq({{3, 4, 5}}, {0}) == 0.0);
    CHECK(radius_of_gyration_sq({{0, 0, 0}, {2, 0, 0}}, {0, 1}) == doctest::Approx(1.0));
    // collinear beads at 0, 1, 2: direct sum oracle gives 2/3
    CHECK(radius_of_gyration_sq({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {0, 1, 2}) ==
          doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(radius_of_gyration_sq({{0, 0, 0}}, {}), Error);
}

TEST_CASE("end-to-end distance") {
    std::vector<Vec3> straight;
    for (int k = 0; k < 10; ++k) straight.push_back({static_cast<double>(k), 0, 0});
    CHECK(end_to_end(straight, iota_ids(10)) == doctest::Approx(9.0));

    std::vector<Vec3> folded{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 0, 0}};
    CHECK(end_to_end(folded, iota_ids(4)) == 0.0);

    Rng rng(3);
    std::vector<Vec3> chain;
    for (int k = 0; k < 12; ++k) chain.push_back(rng.gaussian_vec3());
    CHECK(end_to_end(chain, iota_ids(12)) ==
          doctest::Approx(norm(chain.back() - chain.front())));
}

TEST_CASE("persistence length estimator") {
    SUBCASE("rigid straight chain returns the infinity flag") {
        std::vector<Vec3> straight;
        for (int k = 0; k < 20; ++k) straight.push_back({static_cast<double>(k), 0, 0});
        std::vector<TrajectoryFrame> frames{frame_of(0, straight)};
        const auto fit = persistence_length(frames, iota_ids(20), false);
        CHECK(fit.infinite);
    }
    SUBCASE("synthetic exponential correlations recover lp within 2%") {
        for (double lp : {1.0, 3.0, 10.0}) {
            const double c = std::exp(-1.0 / lp);
            Rng rng(101 + static_cast<std::uint64_t>(lp));
            std::vector<TrajectoryFrame> frames;
            for (int f = 0; f < 2000; ++f)
                frames.push_back(frame_of(f, wormlike_chain(150, c, rng)));
            const auto fit = persistence_length(frames, iota_ids(151), false);
            REQUIRE(!fit.infinite);
            CHECK(fit.lp == doctest::Approx(lp).epsilon(0.02));
        }
    }
    SUBCASE("freely jointed chain has lp below one bond length") {
        Rng rng(7);
        std::vector<TrajectoryFrame> frames;
        for (int f = 0; f < 200; ++f) {
            std::vector<Vec3> pos{{0, 0, 0}};
            for (int k = 0; k < 60; ++k) pos.push_back(pos.back() + rng.unit_vector());
            frames.push_back(frame_of(f, std::move(pos)));
        }
        const auto fit = persistence_length(frames, iota_ids(61), false);
        REQUIRE(!fit.infinite);
        CHECK(fit.lp < 1.0);
    }
    SUBCASE("alternating zig-zag has nonpositive correlation at s = 1") {
        std::vector<Vec3> zigzag{{0, 0, 0}};
        for (int k = 0; k < 12; ++k) {
            const double dy = k % 2 == 0 ? 1.0 : -1.0;
            zigzag.push_back(zigzag.back() + Vec3{0.1, dy, 0});
        }
        std::vector<TrajectoryFrame> frames{frame_of(0, zigzag)};
        CHECK_THROWS_AS(persistence_length(frames, iota_ids(13), false), Error);
    }
}

TEST_CASE("MSD and diffusion") {
    SUBCASE("stationary center of mass") {
        std::vector<TrajectoryFrame> frames;
        for (int f = 0; f < 10; ++f)
            frames.push_back(frame_of(f * 10, {{1, 2, 3}, {3, 2, 1}}));
        const auto r = msd_and_diffusion(frames, {0, 1}, 0.01);
        for (const auto& [t, m] : r.curve) CHECK(m == 0.0);
        CHECK(r.diffusion == 0.0);
    }
    SUBCASE("linear drift: MSD equals (v t)^2 exactly") {
        const Vec3 v{0.3, -0.2, 0.1};
        std::vector<TrajectoryFrame> frames;
        for (int f = 0; f <= 50; ++f)
            frames.push_back(frame_of(f, {static_cast<double>(f) * v}));
        const auto r = msd_and_diffusion(frames, {0}, 1.0);
        for (const auto& [t, m] : r.curve)
            CHECK(m == doctest::Approx(norm2(v) * t * t).epsilon(1e-10));
    }
    SUBCASE("synthetic Brownian paths recover D0 = 1 within 10%") {
        // per-step component variance 2 D0 dt; a single fit over lags up
        // to half the span carries ~40% noise (few independent long-lag
        // segments), so the oracle averages the fitted D over many paths
        const double d0 = 1.0;
        const double dt = 0.05;
        Rng rng(31);
        double d_sum = 0.0;
        const int n_paths = 200;
        for (int path = 0; path < n_paths; ++path) {
            Vec3 p{};
            std::vector<TrajectoryFrame> frames;
            for (int f = 0; f <= 2000; ++f) {
                if (f % 20 == 0) frames.push_back(frame_of(f, {p}));
                p += std::sqrt(2.0 * d0 * dt) * rng.gaussian_vec3();
            }
            d_sum += msd_and_diffusion(frames, {0}, dt).diffusion;
        }
        CHECK(d_sum / n_paths == doctest::Approx(d0).epsilon(0.10));
    }
    SUBCASE("MSD(0) is exactly zero and the curve starts there") {
        auto frames = random_polymer_trajectory(5, 8, 3).frames;
        const auto r = msd_and_diffusion(frames, iota_ids(5), 0.01);
        CHECK(r.curve.front().first == 0.0);
        CHECK(r.curve.front().second == 0.0);
    }
}

TEST_CASE("form factor") {
    SUBCASE("q -> 0 limit is 1") {
        auto traj = random_polymer_trajectory(15, 3, 5);
        const auto pq = form_factor(traj.frames, iota_ids(15), {1e-6});
        CHECK(pq[0].second == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("two beads: (1 + sinc(q d)) / 2") {
        std::vector<TrajectoryFrame> frames{
            frame_of(0, {{0, 0, 0}, {1.7, 0, 0}})};
        for (double q : {0.3, 1.0, 4.0}) {
            const auto pq = form_factor(frames, {0, 1}, {q});
            const double sinc = std::sin(q * 1.7) / (q * 1.7);
            CHECK(pq[0].second == doctest::Approx((1.0 + sinc) / 2.0).epsilon(1e-12));
        }
    }
    SUBCASE("single bead: P(q) = 1 for any q") {
        std::vector<TrajectoryFrame> frames{frame_of(0, {{2, 3, 4}})};
        for (double q : {0.1, 1.0, 10.0})
            CHECK(form_factor(frames, {0}, {q})[0].second == doctest::Approx(1.0));
    }
    SUBCASE("rotation and translation invariance") {
        auto traj = random_polymer_trajectory(12, 2, 9);
        const auto grid = default_q_grid(20.0, 16);
        const auto base = form_factor(traj.frames, iota_ids(12), grid);
        Trajectory moved = traj;
        for (auto& f : moved.frames)
            for (auto& p : f.unwrapped) p = rotate_z(p, 1.1) + Vec3{5, -3, 2};
        const auto rotated = form_factor(moved.frames, iota_ids(12), grid);
        for (std::size_t k = 0; k < base.size(); ++k)
            CHECK(base[k].second == doctest::Approx(rotated[k].second).epsilon(1e-10));
    }
    SUBCASE("deterministic reduction") {
        auto traj = random_polymer_trajectory(10, 4, 2);
        const auto grid = default_q_grid(20.0, 8);
        const auto a = form_factor(traj.frames, iota_ids(10), grid);
        const auto b = form_factor(traj.frames, iota_ids(10), grid);
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].second == b[k].second);
    }
    SUBCASE("bad q grids are rejected") {
        auto traj = random_polymer_trajectory(5, 2, 2);
        CHECK_THROWS_AS(form_factor(traj.frames, iota_ids(5), {}), Error);
        CHECK_THROWS_AS(form_factor(traj.frames, iota_ids(5), {-1.0}), Error);
    }
}

TEST_CASE("pair distance distribution") {
    SUBCASE("two beads at distance 1: single bin of density 10") {
        std::vector<TrajectoryFrame> frames{frame_of(0, {{0, 0, 0}, {1, 0, 0}})};
        const auto g = rdf(frames, {0, 1}, 0.1, 2.0);
        double mass = 0.0;
        int nonzero = 0;
        for (const auto& [r, v] : g) {
            mass += v * 0.1;
            if (v > 0.0) {
                ++nonzero;
                CHECK(v == doctest::Approx(10.0));
                CHECK(r == doctest::Approx(1.05));
            }
        }
        CHECK(nonzero == 1);
        CHECK(mass == doctest::Approx(1.0));
    }
    SUBCASE("r_max below the minimum distance gives all zeros") {
        std::vector<TrajectoryFrame> frames{frame_of(0, {{0, 0, 0}, {3, 0, 0}})};
        for (const auto& [r, v] : rdf(frames, {0, 1}, 0.1, 1.0)) CHECK(v == 0.0);
    }
    SUBCASE("bin mass matches a brute-force histogram exactly") {
        auto traj = random_polymer_trajectory(20, 3, 13);
        const double bin = 0.25;
        const double rmax = 6.0;
        const auto g = rdf(traj.frames, iota_ids(20), bin, rmax);

        // independent oracle
        std::vector<long> counts(static_cast<std::size_t>(rmax / bin + 0.5), 0);
        long pairs = 0;
        for (const auto& f : traj.frames)
            for (int a = 0; a < 20; ++a)
                for (int b = a + 1; b < 20; ++b) {
                    ++pairs;
                    const double r = norm(f.unwrapped[static_cast<std::size_t>(a)] -
                                          f.unwrapped[static_cast<std::size_t>(b)]);
                    const auto k = static_cast<std::size_t>(r / bin);
                    if (k < counts.size()) ++counts[k];
                }
        REQUIRE(g.size() == counts.size());
        for (std::size_t k = 0; k < g.size(); ++k)
            CHECK(g[k].second ==
                  doctest::Approx(static_cast<double>(counts[k]) /
                                  (static_cast<double>(pairs) * bin)));
    }
    SUBCASE("fewer than two beads is an error") {
        std::vector<TrajectoryFrame> frames{frame_of(0, {{0, 0, 0}})};
        CHECK_THROWS_AS(rdf(frames, {0}, 0.1, 1.0), Error);
    }
}

TEST_CASE("analyze applies the applicability matrix") {
    auto run_arch = [](const GeneratorSpec& gen) {
        auto state = generate(gen);
        ThermostatSpec th;
        th.kind = ThermostatSpec::Kind::Langevin;
        RunSpec rs;
        rs.steps = 400;
        rs.dump_every = 50;
        rs.seed = gen.seed;
        auto [fin, traj] = run(state, InteractionParams{}, FeneParams{}, th, rs);
        AnalysisOptions opt;
        return analyze(traj, state.topology, opt);
    };

    SUBCASE("dendrimer lacks lp and ree") {
        GeneratorSpec gen;
        gen.architecture = Architecture::Dendrimer;
        gen.G = 2;
        gen.b = 2;
        gen.N_s = 1;
        gen.B = 12.0;
        gen.seed = 3;
        const auto obs = run_arch(gen);
        CHECK(!obs.ree_mean.has_value());
        CHECK(!obs.lp.has_value());
        CHECK(!obs.form_factor.empty());
        CHECK(!obs.rdf.empty());
    }
    SUBCASE("ring lacks ree but keeps lp") {
        GeneratorSpec gen;
        gen.architecture = Architecture::Ring;
        gen.N = 12;
        gen.B = 12.0;
        gen.seed = 4;
        const auto obs = run_arch(gen);
        CHECK(!obs.ree_mean.has_value());
        CHECK(obs.lp.has_value());
    }
    SUBCASE("brush restricts chain observables to the backbone") {
        GeneratorSpec gen;
        gen.architecture = Architecture::Brush;
        gen.N_b = 8;
        gen.sigma_g = 0.5;
        gen.N_s = 2;
        gen.B = 12.0;
        gen.seed = 5;
        auto state = generate(gen);
        const auto rules = applicability_for(state.topology);
        CHECK(rules.chain == state.topology.backbone);
        const auto obs = run_arch(gen);
        CHECK(obs.ree_mean.has_value());
        CHECK(obs.lp.has_value());
    }
    SUBCASE("star uses a single arm, core to tip") {
        GeneratorSpec gen;
        gen.architecture = Architecture::Star;
        gen.N_a = 4;
        gen.m = 3;
        gen.B = 12.0;
        gen.seed = 6;
        auto state = generate(gen);
        const auto rules = applicability_for(state.topology);
        CHECK(rules.chain == state.topology.arms[0]);
        CHECK(rules.chain.front() == 0);
        CHECK(rules.chain.size() == 5);
    }
}

TEST_CASE("analyze uses the second-half window for averages") {
    // artificial trajectory: Rg jumps at mid-run; the mean must only see
    // the second half
    Trajectory traj;
    traj.box_side = 20.0;
    traj.species = {Species::Polymer, Species::Polymer};
    for (int f = 0; f <= 10; ++f) {
        const double d = f < 5 ? 1.0 : 3.0;  // steps 0..400 vs 500..1000
        traj.frames.push_back(
            frame_of(f * 100, {{0, 0, 0}, {d, 0, 0}}));
    }
    Topology topo;
    topo.architecture = Architecture::Linear;
    topo.backbone = {0, 1};
    AnalysisOptions opt;
    const auto obs = analyze(traj, topo, opt);
    // frames at steps >= 500 all have d = 3 -> Rg^2 = (3/2)^2 = 2.25
    CHECK(obs.rg2_mean == doctest::Approx(2.25));
    CHECK(obs.rg2_series.size() == 11);
    CHECK(*obs.ree_mean == doctest::Approx(3.0));
}

TEST_CASE("observables are invariant under rigid motion of every frame") {
    // persistent chains, so every estimator (including lp) is well defined
    Trajectory traj;
    traj.box_side = 20.0;
    traj.species.assign(11, Species::Polymer);
    Rng rng(21);
    for (int f = 0; f < 6; ++f)
        traj.frames.push_back(
            frame_of(f * 100, wormlike_chain(10, std::exp(-1.0 / 3.0), rng)));
    Topology topo;
    topo.architecture = Architecture::Linear;
    topo.backbone = iota_ids(11);
    AnalysisOptions opt;
    const auto base = analyze(traj, topo, opt);

    Trajectory moved = traj;
    for (auto& f : moved.frames)
        for (auto& p : f.unwrapped) p = rotate_z(p, 0.7) + Vec3{3, 1, -2};
    const auto obs = analyze(moved, topo, opt);

    CHECK(obs.rg2_mean == doctest::Approx(base.rg2_mean).epsilon(1e-10));
    CHECK(*obs.ree_mean == doctest::Approx(*base.ree_mean).epsilon(1e-10));
    REQUIRE(base.lp.has_value());
    REQUIRE(obs.lp.has_value());
    CHECK(obs.lp->lp == doctest::Approx(base.lp->lp).epsilon(1e-9));
    for (std::size_t k = 0; k < base.form_factor.size(); ++k)
        CHECK(obs.form_factor[k].second ==
              doctest::Approx(base.form_factor[k].second).epsilon(1e-9));
    for (std::size_t k = 0; k < base.rdf.size(); ++k)
        CHECK(obs.rdf[k].second == doctest::Approx(base.rdf[k].second).epsilon(1e-10));
}
