#pragma once

#include <memory>
#include <optional>
#include <vector>

namespace adiapower {

enum class ScheduleVariant { Static, LinearChirp, DetuningCoupled, Cyclic };

/// Instantaneous coupling/detuning pair (s^-1).
struct SchedulePoint {
    double kappa;
    double delta;
};

/// Analytic time derivatives of the coupling/detuning pair (s^-2).
/// `one_sided` marks evaluation exactly at a non-smooth instant (period wrap,
/// detuning-coupled cusp or clamp boundary), where the right-sided value is
/// reported.
struct ScheduleDerivatives {
    double dkappa;
    double ddelta;
    bool one_sided;
};

/// Time-parameterized driving profile (kappa(t), Delta(t)) in one of four
/// variants:
///   Static           kappa = kappa0,                    Delta = delta
///   LinearChirp      kappa = kappa0,                    Delta = delta + beta*(t - t0)
///   DetuningCoupled  kappa = max(0, kappa0 - sqrt|Delta|), same linear Delta
///   Cyclic           inner profile evaluated at t mod period
struct Schedule {
    ScheduleVariant variant = ScheduleVariant::Static;
    double kappa0 = 0.0; // s^-1
    double delta = 0.0;  // s^-1
    double beta = 0.0;   // s^-2
    double t0 = 0.0;     // s
    double period = 0.0; // s, Cyclic only
    std::shared_ptr<const Schedule> inner; // Cyclic only

    static Schedule static_profile(double kappa0, double delta);
    static Schedule linear_chirp(double kappa0, double delta, double beta, double t0);
    static Schedule detuning_coupled(double kappa0, double delta, double beta, double t0);
    static Schedule cyclic(Schedule inner, double period);

    /// Throws std::domain_error on nonfinite fields, kappa0 < 0, nonpositive
    /// period, or cyclic nesting deeper than one level.
    void validate() const;

    SchedulePoint eval(double t) const;
    ScheduleDerivatives eval_derivatives(double t) const;

    /// Time where Delta crosses zero, t0 - delta/beta; empty for Static,
    /// Cyclic, or beta = 0.
    std::optional<double> resonance_crossing() const;

    /// Base coupling amplitude (the inner profile's for Cyclic).
    double base_kappa0() const;

    /// Upper bound on |Delta(t)| over [t_from, t_to]; used for step capping.
    double max_abs_delta(double t_from, double t_to) const;

    /// Non-smooth instants strictly inside (t_from, t_to), sorted ascending:
    /// period wraps, detuning-coupled resonance cusps and clamp boundaries.
    std::vector<double> breakpoints(double t_from, double t_to) const;
};

} // namespace adiapower
