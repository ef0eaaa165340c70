#pragma once

#include "adiapower/model.hpp"
#include "adiapower/schedule.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

namespace adiapower {

/// Full description of one simulation run.
struct Scenario {
    Schedule schedule;
    LossModel losses;
    double t_start = 0.0;
    double t_end = 0.0;
    CoilPair initial{};
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int sample_count = 2001;

    /// Throws std::domain_error unless t_end > t_start, tolerances > 0,
    /// sample_count >= 2, and schedule/losses are valid.
    void validate() const;
};

/// Internal phase gauge used for integration. Energies are gauge independent;
/// DrainOnly exists to make that testable.
enum class RotatingFrame { Symmetric, DrainOnly };

/// Instant recharge of the source at a cycle boundary.
struct ReloadEvent {
    double time;
    double source_energy_before;
    double injected; // 1 - source_energy_before
};

/// Sampled record of one run: state, energies, running dissipation integrals,
/// the driving profile, and (once annotated) adiabatic diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::complex<double>> a_S, a_D;
    std::vector<double> E_S, E_D;
    std::vector<double> acc_S, acc_D;
    std::vector<double> kappa, delta;
    // Right-hand-side values at the samples; support dense output in between.
    std::vector<std::complex<double>> da_S, da_D;
    // Filled by annotate_trajectory.
    std::vector<double> theta, epsilon, ratio, b_minus_sq, b_plus_sq;
    std::vector<ReloadEvent> reloads;

    std::size_t size() const { return times.size(); }

    /// Dissipation integrals at any T inside the span, cubic-Hermite
    /// interpolated between samples (exact at samples).
    double acc_S_at(double T) const;
    double acc_D_at(double T) const;
};

/// Raised when the integrator cannot continue (step underflow or nonfinite
/// state); carries the time at which integration failed.
struct integration_error : std::runtime_error {
    double failure_time;
    integration_error(const std::string& what, double t)
        : std::runtime_error(what), failure_time(t) {}
};

/// Time derivative of the coupled-mode state at time t. The accumulator slots
/// of the returned pair carry d(acc)/dt = |a|^2.
CoilPair rhs(double t, const CoilPair& state, const Schedule& schedule,
             const LossModel& losses, RotatingFrame frame = RotatingFrame::Symmetric);

/// Integrate the scenario over [t_start, t_end] with an embedded adaptive
/// Runge-Kutta 5(4) pair; samples land exactly on the uniform sample grid.
Trajectory propagate(const Scenario& scenario,
                     RotatingFrame frame = RotatingFrame::Symmetric);

/// Integrate n_cycles periods of a Cyclic scenario starting at t = 0,
/// recharging the source (a_S <- 1, a_D and accumulators untouched) at every
/// interior period boundary. Samples at a boundary record the post-reload
/// state; the displaced source energy is kept in Trajectory::reloads.
Trajectory propagate_cycles(const Scenario& scenario, int n_cycles);

} // namespace adiapower
