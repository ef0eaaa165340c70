#pragma once

#include "adiapower/metrics.hpp"
#include "adiapower/propagator.hpp"

#include <map>
#include <string>
#include <vector>

namespace adiapower {

/// Generic sweep table: named columns, row-major values, free-form metadata.
/// Metadata never enters CSV output, so repeated runs emit identical bytes.
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> metadata;
};

/// Single-shot transfer comparison: chirped passage vs fixed resonant
/// coupling, each with and without coil losses (no extraction), over one
/// 2e-4 s window at kappa0 = 4e4.
struct TransferComparison {
    Trajectory ap_lossless;
    Trajectory ap_lossy;
    Trajectory static_lossless;
    Trajectory static_lossy;
};
TransferComparison transfer_comparison();

/// Coil-distance presets encoded as loss-to-coupling ratios.
enum class DistancePreset { Near, Far };

/// Sweep of the static detuning offset at kappa0 = 5e4 with extraction
/// gamma_W = 1e4: each grid point runs both the chirped and the static
/// schedule and records efficiency and extracted work over the window.
/// Columns: delta, eta_ap, eta_static, useful_ap, useful_static.
SweepResult detuning_sweep(const std::vector<double>& delta_grid, DistancePreset preset);

/// 2D robustness scans over (kappa0, gamma) with gamma_S = gamma_D = gamma,
/// delta = 2e5, gamma_W = 1e4. Columns: kappa0, gamma, eta.
struct RobustnessMaps {
    SweepResult chirped;
    SweepResult static_resonant;
};
RobustnessMaps robustness_map(const std::vector<double>& kappa_grid,
                              const std::vector<double>& gamma_grid);

/// Detuning-coupled run (coupling tied to the sweeping detuning) with equal
/// loss and extraction rates; returns the annotated trajectory plus the
/// running efficiency per sample (NaN before the denominator is positive).
struct CoupledKappaStudy {
    Trajectory trajectory;
    std::vector<double> running_eta;
};
CoupledKappaStudy coupled_kappa_study();

/// Repeated recharge cycles of the chirped schedule: n_cycles periods of
/// length t_rep, source recharged at each boundary. Reports per-cycle and
/// cumulative efficiency.
struct CycleStudy {
    Trajectory trajectory;
    std::vector<EfficiencyReport> per_cycle;
    EfficiencyReport cumulative;
    LossModel losses;
};
CycleStudy repeated_cycles(int n_cycles, double t_rep,
                           const LossModel& losses = {2e3, 2e3, 1e4});

/// Default grids for the sweeps above.
std::vector<double> default_detuning_grid();         // 81 linear in [-2e5, 2e5]
std::vector<double> default_coupling_grid();         // 41 log in [1e4, 1e5]
std::vector<double> default_loss_grid();             // 41 log in [1e2, 2e4]
std::vector<double> linear_grid(double lo, double hi, int n);
std::vector<double> log_grid(double lo, double hi, int n);

/// Worker count for sweeps: hardware concurrency, capped by the
/// ADIAPOWER_THREADS environment variable when set to a positive integer.
int sweep_thread_count();

} // namespace adiapower
