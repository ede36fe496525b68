#include "topomd/engine.hpp"

#include <cmath>
#include <string>

namespace topomd {

namespace {

constexpr double kBlowupSpeed2 = 1.0e6;  // abort when any |v|^2 exceeds this

double twice_kinetic(const SystemState& state) {
    double k2 = 0.0;
    for (const auto& b : state.beads) k2 += b.mass * norm2(b.velocity);
    return k2;
}

bool all_velocities_zero(const SystemState& state) {
    for (const auto& b : state.beads)
        if (norm2(b.velocity) != 0.0) return false;
    return true;
}

} // namespace

void initialize_velocities(SystemState& state, double T, Rng& rng) {
    if (T <= 0.0) throw Error("initialize_velocities: T must be positive");
    Vec3 momentum{};
    for (auto& b : state.beads) {
        const double sd = std::sqrt(T / b.mass);
        b.velocity = sd * rng.gaussian_vec3();
        momentum += b.mass * b.velocity;
    }
    const Vec3 drift = (1.0 / static_cast<double>(state.beads.size())) * momentum;
    for (auto& b : state.beads) b.velocity -= (1.0 / b.mass) * drift;
}

Simulation::Simulation(SystemState state, InteractionParams params, FeneParams fene,
                       ThermostatSpec thermostat, double dt, Rng rng)
    : state_(std::move(state)),
      thermostat_(thermostat),
      dt_(dt),
      ff_(params, fene),
      rng_(rng) {
    if (dt_ <= 0.0) throw Error("Simulation: dt must be positive");
    ff_.bind(state_);
    trajectory_.box_side = state_.box.side;
    trajectory_.species.reserve(state_.beads.size());
    for (const auto& b : state_.beads) trajectory_.species.push_back(b.species);
}

double Simulation::kinetic_energy() const { return 0.5 * twice_kinetic(state_); }

void Simulation::prime_forces() {
    ff_.evaluate(state_, force_);
    if (thermostat_.kind == ThermostatSpec::Kind::Langevin) {
        const double amp =
            std::sqrt(2.0 * thermostat_.gamma * thermostat_.T / dt_);
        for (auto& b : state_.beads) {
            const Vec3 noise = std::sqrt(b.mass) * amp * rng_.gaussian_vec3();
            force_.force[static_cast<std::size_t>(b.id)] +=
                noise - thermostat_.gamma * b.mass * b.velocity;
        }
    }
    primed_ = true;
}

void Simulation::step_once() {
    if (!primed_) prime_forces();
    auto& beads = state_.beads;
    const double half_dt = 0.5 * dt_;
    const std::size_t n = beads.size();
    const bool nose_hoover = thermostat_.kind == ThermostatSpec::Kind::NoseHoover;

    if (nose_hoover) {
        const double g_t = 3.0 * static_cast<double>(n) * thermostat_.T;
        const double q = thermostat_.effective_q(n);
        nh_.xi += half_dt * (twice_kinetic(state_) - g_t) / q;
        const double scale = std::exp(-nh_.xi * half_dt);
        for (auto& b : beads) b.velocity *= scale;
    }

    for (std::size_t i = 0; i < n; ++i)
        beads[i].velocity += (half_dt / beads[i].mass) * force_.force[i];
    for (auto& b : beads) {
        b.position += dt_ * b.velocity;
        state_.box.wrap(b.position, b.image);
    }
    state_.step += 1;

    try {
        ff_.evaluate(state_, force_);
    } catch (const OverstretchError& e) {
        throw OverstretchError("step " + std::to_string(state_.step) + ": " + e.what(),
                               e.i, e.j);
    } catch (const OverlapError& e) {
        throw OverlapError("step " + std::to_string(state_.step) + ": " + e.what(),
                           e.i, e.j);
    }
    if (thermostat_.kind == ThermostatSpec::Kind::Langevin) {
        const double amp =
            std::sqrt(2.0 * thermostat_.gamma * thermostat_.T / dt_);
        for (auto& b : beads) {
            const Vec3 noise = std::sqrt(b.mass) * amp * rng_.gaussian_vec3();
            force_.force[static_cast<std::size_t>(b.id)] +=
                noise - thermostat_.gamma * b.mass * b.velocity;
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        beads[i].velocity += (half_dt / beads[i].mass) * force_.force[i];

    if (nose_hoover) {
        const double scale = std::exp(-nh_.xi * half_dt);
        for (auto& b : beads) b.velocity *= scale;
        const double g_t = 3.0 * static_cast<double>(n) * thermostat_.T;
        const double q = thermostat_.effective_q(n);
        nh_.xi += half_dt * (twice_kinetic(state_) - g_t) / q;
    }

    check_health();
}

void Simulation::check_health() const {
    for (const auto& b : state_.beads)
        if (norm2(b.velocity) > kBlowupSpeed2 || !is_finite(b.velocity) ||
            !is_finite(b.position))
            throw Error("numerical blow-up at step " + std::to_string(state_.step) +
                        ": bead " + std::to_string(b.id) + " speed " +
                        std::to_string(norm(b.velocity)));
}

void Simulation::record_frame() {
    if (!trajectory_.frames.empty() && trajectory_.frames.back().step >= state_.step)
        return;
    TrajectoryFrame frame;
    frame.step = state_.step;
    frame.unwrapped.reserve(state_.beads.size());
    for (const auto& b : state_.beads) frame.unwrapped.push_back(b.unwrapped(state_.box));
    trajectory_.frames.push_back(std::move(frame));
}

void Simulation::run(long steps, long dump_every) {
    if (steps < 0) throw Error("run: steps must be >= 0");
    if (dump_every <= 0) throw Error("run: dump_every must be positive");
    dump_every_ = dump_every;
    if (state_.step == 0 && thermostat_.kind != ThermostatSpec::Kind::None &&
        thermostat_.T > 0.0 && all_velocities_zero(state_) && !state_.beads.empty())
        initialize_velocities(state_, thermostat_.T, rng_);
    if (trajectory_.frames.empty()) record_frame();
    extend(steps);
}

void Simulation::extend(long extra_steps) {
    if (extra_steps < 0) throw Error("extend: steps must be >= 0");
    if (trajectory_.frames.empty()) record_frame();
    for (long k = 0; k < extra_steps; ++k) {
        step_once();
        if (state_.step % dump_every_ == 0) record_frame();
    }
    record_frame();  // final frame always dumped
}

SystemState step_langevin(SystemState state, const InteractionParams& params,
                          const FeneParams& fene, double dt, double gamma, double T,
                          Rng& rng) {
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::Langevin;
    th.T = T;
    th.gamma = gamma;
    Simulation sim(std::move(state), params, fene, th, dt, rng);
    sim.step();
    rng = sim.rng();
    return sim.state();
}

std::pair<SystemState, NoseHooverState> step_nose_hoover(
    SystemState state, NoseHooverState nh, const InteractionParams& params,
    const FeneParams& fene, double dt, double T, double Q) {
    if (Q <= 0.0) throw Error("step_nose_hoover: Q must be positive");
    ThermostatSpec th;
    th.kind = ThermostatSpec::Kind::NoseHoover;
    th.T = T;
    th.Q = Q;
    Simulation sim(std::move(state), params, fene, th, dt, Rng(0));
    sim.set_nose_hoover(nh);
    sim.step();
    return {sim.state(), sim.nose_hoover()};
}

std::pair<SystemState, Trajectory> run(SystemState state, const InteractionParams& params,
                                       const FeneParams& fene,
                                       const ThermostatSpec& thermostat,
                                       const RunSpec& spec) {
    Simulation sim(std::move(state), params, fene, thermostat, spec.dt,
                   Rng(spec.seed, 2));
    sim.run(spec.steps, spec.dump_every);
    return {sim.state(), sim.trajectory()};
}

std::pair<SystemState, Trajectory> extend_run(SystemState state, Trajectory trajectory,
                                              long extra_steps,
                                              const InteractionParams& params,
                                              const FeneParams& fene,
                                              const ThermostatSpec& thermostat,
                                              double dt, long dump_every, Rng rng) {
    if (trajectory.frames.empty())
        throw Error("extend_run: empty trajectory");
    if (trajectory.frames.back().step != state.step)
        throw Error("extend_run: state at step " + std::to_string(state.step) +
                    " does not match trajectory ending at step " +
                    std::to_string(trajectory.frames.back().step));
    Simulation sim(std::move(state), params, fene, thermostat, dt, rng);
    sim.trajectory() = std::move(trajectory);
    sim.set_dump_every(dump_every);
    sim.extend(extra_steps);
    return {sim.state(), sim.trajectory()};
}

} // namespace topomd
