#include "adiapower/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adiapower {

double mixing_angle(double kappa, double delta_t) {
    if (kappa < 0.0)
        throw std::domain_error("mixing_angle requires kappa >= 0");
    if (kappa == 0.0 && delta_t == 0.0)
        throw std::domain_error("mixing angle undefined at kappa = delta = 0");
    return 0.5 * std::atan2(2.0 * kappa, delta_t);
}

double quasienergy(double kappa, double delta_t) {
    return 0.5 * std::hypot(2.0 * kappa, delta_t);
}

std::pair<std::complex<double>, std::complex<double>>
to_adiabatic(const CoilPair& state, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {state.a_S * c - state.a_D * s, state.a_S * s + state.a_D * c};
}

double adiabaticity_ratio(double kappa, double dkappa, double delta_t, double ddelta) {
    const double gap_sq = 4.0 * kappa * kappa + delta_t * delta_t;
    if (gap_sq == 0.0)
        throw std::domain_error("adiabaticity ratio singular at kappa = delta = 0");
    return std::fabs(dkappa * delta_t - kappa * ddelta) / (gap_sq * std::sqrt(gap_sq));
}

double adiabaticity_ratio(const Schedule& schedule, double t) {
    const SchedulePoint p = schedule.eval(t);
    const ScheduleDerivatives d = schedule.eval_derivatives(t);
    return adiabaticity_ratio(p.kappa, d.dkappa, p.delta, d.ddelta);
}

HierarchyReport hierarchy_check(const LossModel& losses, const Schedule& schedule,
                                double t_start, double t_end) {
    HierarchyReport r;
    r.gamma_max = std::max(losses.gamma_S, losses.gamma_D);
    r.kappa0 = schedule.base_kappa0();
    r.delta_min_abs = std::min(std::fabs(schedule.eval(t_start).delta),
                               std::fabs(schedule.eval(t_end).delta));
    r.loss_below_coupling = r.gamma_max < r.kappa0;
    r.coupling_below_detuning = r.kappa0 < r.delta_min_abs;
    return r;
}

void annotate_trajectory(Trajectory& trajectory, const Schedule& schedule) {
    const std::size_t n = trajectory.size();
    trajectory.theta.resize(n);
    trajectory.epsilon.resize(n);
    trajectory.ratio.resize(n);
    trajectory.b_minus_sq.resize(n);
    trajectory.b_plus_sq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = trajectory.times[i];
        const double kappa = trajectory.kappa[i];
        const double delta = trajectory.delta[i];
        const double theta = mixing_angle(kappa, delta);
        trajectory.theta[i] = theta;
        trajectory.epsilon[i] = quasienergy(kappa, delta);
        const ScheduleDerivatives d = schedule.eval_derivatives(t);
        trajectory.ratio[i] = adiabaticity_ratio(kappa, d.dkappa, delta, d.ddelta);
        CoilPair state;
        state.a_S = trajectory.a_S[i];
        state.a_D = trajectory.a_D[i];
        const auto [bm, bp] = to_adiabatic(state, theta);
        trajectory.b_minus_sq[i] = std::norm(bm);
        trajectory.b_plus_sq[i] = std::norm(bp);
    }
}

} // namespace adiapower
