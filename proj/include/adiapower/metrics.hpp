#pragma once

#include "adiapower/model.hpp"
#include "adiapower/propagator.hpp"

#include <stdexcept>
#include <vector>

namespace adiapower {

/// Energy bookkeeping over a horizon: eta = useful / (useful + dissipated).
struct EfficiencyReport {
    double eta;
    double useful_energy;      // gamma_W * ∫|a_D|^2
    double dissipated_source;  // gamma_S * ∫|a_S|^2
    double dissipated_drain;   // gamma_D * ∫|a_D|^2
    double horizon_T;
};

/// Raised when the efficiency denominator vanishes (all rates zero, or the
/// fields never carried energy).
struct undefined_efficiency : std::domain_error {
    undefined_efficiency() : std::domain_error("efficiency undefined: zero denominator") {}
};

/// Efficiency over the first T seconds of the trajectory (integrals
/// interpolated between samples). Throws undefined_efficiency when the
/// denominator is zero; gamma_W = 0 with real dissipation gives eta = 0.
EfficiencyReport efficiency(const Trajectory& trajectory, const LossModel& losses, double T);

/// Efficiency over the whole trajectory span.
EfficiencyReport efficiency(const Trajectory& trajectory, const LossModel& losses);

/// Extracted work gamma_W * ∫_0^T |a_D|^2 dt.
double useful_energy(const Trajectory& trajectory, double gamma_W, double T);

/// Efficiency of a stationary field configuration with energy ratio
/// R = |a_D|^2/|a_S|^2: gamma_W R / (gamma_S + (gamma_D + gamma_W) R).
double static_steady_efficiency(double energy_ratio, const LossModel& losses);

/// Max relative drift of E_S + E_D + 2 gamma_S acc_S + 2 (gamma_D+gamma_W) acc_D
/// over the samples; exactly conserved by the dynamics, so this measures
/// integration error.
double energy_balance_residual(const Trajectory& trajectory, const LossModel& losses);

/// Count local maxima whose prominence exceeds `threshold`. Walking out from
/// a peak, the base on each side is the minimum reached before a strictly
/// higher sample; a walk that falls off the end of the data uses base 0
/// (the signal is treated as zero outside the window). Prominence is
/// peak - max(left base, right base).
int count_prominent_peaks(const std::vector<double>& values, double threshold);

} // namespace adiapower
