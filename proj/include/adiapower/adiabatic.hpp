#pragma once

#include "adiapower/model.hpp"
#include "adiapower/propagator.hpp"
#include "adiapower/schedule.hpp"

#include <complex>
#include <utility>

namespace adiapower {

/// Instantaneous dressed-basis view of a state.
struct AdiabaticFrame {
    double theta;   // mixing angle, rad, in [0, pi/2]
    double epsilon; // quasienergy splitting, s^-1, >= 0
    std::complex<double> b_minus;
    std::complex<double> b_plus;
};

/// Endpoint check of the rate ordering gamma_{S,D} < kappa0 < |Delta|.
struct HierarchyReport {
    double gamma_max;
    double kappa0;
    double delta_min_abs; // min |Delta| over the two window endpoints
    bool loss_below_coupling;
    bool coupling_below_detuning;

    bool satisfied() const { return loss_below_coupling && coupling_below_detuning; }
};

/// Mixing angle theta = atan2(2 kappa, delta) / 2, in [0, pi/2] for
/// kappa >= 0: pi/2 as delta -> -inf, 0 as delta -> +inf.
/// Throws std::domain_error for kappa < 0 or kappa = delta = 0.
double mixing_angle(double kappa, double delta_t);

/// Quasienergy splitting sqrt(4 kappa^2 + delta^2) / 2.
double quasienergy(double kappa, double delta_t);

/// Rotate bare amplitudes into the dressed basis:
/// b_- = a_S cos(theta) - a_D sin(theta), b_+ = a_S sin(theta) + a_D cos(theta).
std::pair<std::complex<double>, std::complex<double>>
to_adiabatic(const CoilPair& state, double theta);

/// Nonadiabaticity measure |dkappa*delta - kappa*ddelta| / (4kappa^2+delta^2)^(3/2)
/// from the schedule's analytic derivatives; << 1 means adiabatic following.
/// Throws std::domain_error when kappa = delta = 0 at t.
double adiabaticity_ratio(const Schedule& schedule, double t);

/// Same ratio from explicit values, for callers that already hold them.
double adiabaticity_ratio(double kappa, double dkappa, double delta_t, double ddelta);

HierarchyReport hierarchy_check(const LossModel& losses, const Schedule& schedule,
                                double t_start, double t_end);

/// Fill theta, epsilon, ratio, and the dressed-basis populations per sample.
void annotate_trajectory(Trajectory& trajectory, const Schedule& schedule);

} // namespace adiapower
