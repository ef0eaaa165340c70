#include "adiapower/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace adiapower {

EfficiencyReport efficiency(const Trajectory& trajectory, const LossModel& losses, double T) {
    const double t_from = trajectory.times.front();
    const double acc_S = trajectory.acc_S_at(t_from + T) - trajectory.acc_S.front();
    const double acc_D = trajectory.acc_D_at(t_from + T) - trajectory.acc_D.front();

    EfficiencyReport r;
    r.useful_energy = losses.gamma_W * acc_D;
    r.dissipated_source = losses.gamma_S * acc_S;
    r.dissipated_drain = losses.gamma_D * acc_D;
    r.horizon_T = T;
    const double denominator = r.useful_energy + r.dissipated_source + r.dissipated_drain;
    if (denominator == 0.0)
        throw undefined_efficiency{};
    r.eta = r.useful_energy / denominator;
    return r;
}

EfficiencyReport efficiency(const Trajectory& trajectory, const LossModel& losses) {
    return efficiency(trajectory, losses, trajectory.times.back() - trajectory.times.front());
}

double useful_energy(const Trajectory& trajectory, double gamma_W, double T) {
    const double t_from = trajectory.times.front();
    return gamma_W * (trajectory.acc_D_at(t_from + T) - trajectory.acc_D.front());
}

double static_steady_efficiency(double energy_ratio, const LossModel& losses) {
    if (energy_ratio < 0.0)
        throw std::domain_error("energy ratio must be >= 0");
    const double denominator =
        losses.gamma_S + (losses.gamma_D + losses.gamma_W) * energy_ratio;
    if (denominator == 0.0)
        throw undefined_efficiency{};
    return losses.gamma_W * energy_ratio / denominator;
}

double energy_balance_residual(const Trajectory& trajectory, const LossModel& losses) {
    auto balance = [&](std::size_t i) {
        return trajectory.E_S[i] + trajectory.E_D[i] +
               2.0 * losses.gamma_S * trajectory.acc_S[i] +
               2.0 * (losses.gamma_D + losses.gamma_W) * trajectory.acc_D[i];
    };
    const double b0 = balance(0);
    const double scale = std::max(b0, 1e-300);
    double worst = 0.0;
    for (std::size_t i = 1; i < trajectory.size(); ++i)
        worst = std::max(worst, std::fabs(balance(i) - b0) / scale);
    return worst;
}

int count_prominent_peaks(const std::vector<double>& values, double threshold) {
    const std::size_t n = values.size();
    int count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool rises_into = i == 0 || values[i] > values[i - 1];
        const bool falls_after = i + 1 == n || values[i] >= values[i + 1];
        if (!rises_into || !falls_after) continue;

        double left_base = 0.0; // zero outside the window
        double low = values[i];
        for (std::size_t j = i; j > 0;) {
            --j;
            if (values[j] > values[i]) {
                left_base = low;
                break;
            }
            low = std::min(low, values[j]);
        }
        double right_base = 0.0;
        low = values[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (values[j] > values[i]) {
                right_base = low;
                break;
            }
            low = std::min(low, values[j]);
        }
        if (values[i] - std::max(left_base, right_base) > threshold) ++count;
    }
    return count;
}

} // namespace adiapower
