#pragma once

#include <utility>

#include "topomd/forcefield.hpp"
#include "topomd/rng.hpp"
#include "topomd/system.hpp"
#include "topomd/trajectory.hpp"

namespace topomd {

/// Friction variable of the Nose-Hoover heat-bath coupling.
struct NoseHooverState {
    double xi = 0.0;
};

/// Draw Maxwell-Boltzmann velocities at temperature T and remove the
/// center-of-mass drift.
void initialize_velocities(SystemState& state, double T, Rng& rng);

/// Owns one integration loop: system state, force field, thermostat
/// internals (xi, noise stream) and the produced trajectory, so a run can
/// be extended seamlessly.
class Simulation {
public:
    Simulation(SystemState state, InteractionParams params, FeneParams fene,
               ThermostatSpec thermostat, double dt, Rng rng);

    /// Advance `steps` steps, dumping a frame at every multiple of
    /// dump_every (absolute step count) plus the final step. The initial
    /// configuration becomes the first frame of a fresh trajectory.
    /// Velocities are auto-initialized at T on the first run of a
    /// zero-velocity state. Aborts with step and bead diagnostics on bond
    /// overstretch or velocity blow-up.
    void run(long steps, long dump_every);

    /// Continue integrating; frames append with continuing step numbers.
    void extend(long extra_steps);

    /// One integration step without trajectory recording.
    void step() { step_once(); }

    void set_nose_hoover(NoseHooverState nh) { nh_ = nh; }
    void set_dump_every(long dump_every) {
        if (dump_every <= 0) throw Error("dump_every must be positive");
        dump_every_ = dump_every;
    }

    const SystemState& state() const { return state_; }
    const Trajectory& trajectory() const { return trajectory_; }
    Trajectory& trajectory() { return trajectory_; }
    const NoseHooverState& nose_hoover() const { return nh_; }
    Rng& rng() { return rng_; }
    double dt() const { return dt_; }
    long dump_every() const { return dump_every_; }

    /// Potential energy of the current configuration (fresh after a step).
    double potential_energy() const { return force_.potential_energy; }
    double kinetic_energy() const;

private:
    void prime_forces();
    void step_once();
    void record_frame();
    void check_health() const;

    SystemState state_;
    ThermostatSpec thermostat_;
    double dt_;
    ForceField ff_;
    Rng rng_;
    NoseHooverState nh_;
    ForceAccumulator force_;   // total force; includes friction + noise under Langevin
    bool primed_ = false;
    long dump_every_ = 100;
    Trajectory trajectory_;
};

/// Single Langevin velocity-Verlet step: total force is the conservative
/// force minus gamma*m*v plus Gaussian noise of per-component amplitude
/// sqrt(2 m gamma k_B T / dt).
SystemState step_langevin(SystemState state, const InteractionParams& params,
                          const FeneParams& fene, double dt, double gamma, double T,
                          Rng& rng);

/// Single Nose-Hoover step: half-step xi update and velocity scaling
/// around a velocity-Verlet core, d(xi)/dt = (sum m v^2 - g k_B T) / Q.
std::pair<SystemState, NoseHooverState> step_nose_hoover(
    SystemState state, NoseHooverState nh, const InteractionParams& params,
    const FeneParams& fene, double dt, double T, double Q);

/// One-shot run from a spec; returns the final state and the trajectory.
std::pair<SystemState, Trajectory> run(SystemState state,
                                       const InteractionParams& params,
                                       const FeneParams& fene,
                                       const ThermostatSpec& thermostat,
                                       const RunSpec& spec);

/// Continue a finished run for extra_steps. The given state must be the
/// final state of the trajectory (matching step counters) and rng carries
/// the continuation stream.
std::pair<SystemState, Trajectory> extend_run(SystemState state, Trajectory trajectory,
                                              long extra_steps,
                                              const InteractionParams& params,
                                              const FeneParams& fene,
                                              const ThermostatSpec& thermostat,
                                              double dt, long dump_every, Rng rng);

} // namespace topomd
