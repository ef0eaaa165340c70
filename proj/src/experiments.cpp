#include "adiapower/experiments.hpp"

#include "adiapower/adiabatic.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace adiapower {

namespace {

constexpr double kWindowEnd = 2e-4;  // common horizon, s
constexpr double kChirpRate = 3e9;   // s^-2
constexpr double kChirpT0 = 1e-4;    // s
constexpr double kExtraction = 1e4;  // gamma_W for the sweeps, s^-1

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Scenario make_scenario(Schedule schedule, LossModel losses, int sample_count) {
    Scenario s;
    s.schedule = std::move(schedule);
    s.losses = losses;
    s.t_start = 0.0;
    s.t_end = kWindowEnd;
    s.sample_count = sample_count;
    return s;
}

// Run fn(i) for i in [0, n) across the sweep workers. Each index writes only
// its own output slot, so scheduling order never affects results.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(sweep_thread_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

int sweep_thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("ADIAPOWER_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<int>(std::min<long>(v, hw));
    }
    return hw;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 1) throw std::domain_error("grid requires n >= 1");
    if (n == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > 0.0))
        throw std::domain_error("log grid requires positive bounds");
    if (n < 1) throw std::domain_error("grid requires n >= 1");
    if (n == 1) return {lo};
    std::vector<double> g(static_cast<std::size_t>(n));
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_detuning_grid() { return linear_grid(-2e5, 2e5, 81); }
std::vector<double> default_coupling_grid() { return log_grid(1e4, 1e5, 41); }
std::vector<double> default_loss_grid() { return log_grid(1e2, 2e4, 41); }

TransferComparison transfer_comparison() {
    const double kappa0 = 4e4;
    const Schedule ap = Schedule::linear_chirp(kappa0, 2e5, kChirpRate, kChirpT0);
    const Schedule fixed = Schedule::static_profile(kappa0, 0.0);
    const LossModel none{};
    const LossModel coil_losses{2e3, 2e3, 0.0};
    TransferComparison r;
    r.ap_lossless = propagate(make_scenario(ap, none, 2001));
    r.ap_lossy = propagate(make_scenario(ap, coil_losses, 2001));
    r.static_lossless = propagate(make_scenario(fixed, none, 2001));
    r.static_lossy = propagate(make_scenario(fixed, coil_losses, 2001));
    return r;
}

SweepResult detuning_sweep(const std::vector<double>& delta_grid, DistancePreset preset) {
    if (delta_grid.empty()) throw std::domain_error("detuning sweep requires a nonempty grid");
    const double kappa0 = 5e4;
    const double gamma = preset == DistancePreset::Near ? kappa0 / 30.0 : kappa0 / 17.0;
    const LossModel losses{gamma, gamma, kExtraction};

    SweepResult out;
    out.columns = {"delta", "eta_ap", "eta_static", "useful_ap", "useful_static"};
    out.rows.assign(delta_grid.size(), {});
    parallel_for(delta_grid.size(), [&](std::size_t i) {
        const double d = delta_grid[i];
        const Trajectory ap = propagate(
            make_scenario(Schedule::linear_chirp(kappa0, d, kChirpRate, kChirpT0), losses, 201));
        const Trajectory st =
            propagate(make_scenario(Schedule::static_profile(kappa0, d), losses, 201));
        const EfficiencyReport e_ap = efficiency(ap, losses);
        const EfficiencyReport e_st = efficiency(st, losses);
        out.rows[i] = {d, e_ap.eta, e_st.eta, e_ap.useful_energy, e_st.useful_energy};
    });
    out.metadata = {{"kappa0", "5e4"},
                    {"gamma_S=gamma_D", preset == DistancePreset::Near ? "kappa0/30" : "kappa0/17"},
                    {"gamma_W", "1e4"},
                    {"beta", "3e9"},
                    {"t0", "1e-4"},
                    {"window", "[0, 2e-4]"},
                    {"timestamp", timestamp_utc()}};
    return out;
}

RobustnessMaps robustness_map(const std::vector<double>& kappa_grid,
                              const std::vector<double>& gamma_grid) {
    if (kappa_grid.empty() || gamma_grid.empty())
        throw std::domain_error("robustness map requires nonempty grids");
    const double delta = 2e5;
    const std::size_t total = kappa_grid.size() * gamma_grid.size();

    RobustnessMaps maps;
    for (SweepResult* r : {&maps.chirped, &maps.static_resonant}) {
        r->columns = {"kappa0", "gamma", "eta"};
        r->rows.assign(total, {});
        r->metadata = {{"delta", "2e5"},      {"gamma_W", "1e4"},
                       {"beta", "3e9"},       {"t0", "1e-4"},
                       {"window", "[0, 2e-4]"}, {"timestamp", timestamp_utc()}};
    }
    parallel_for(total, [&](std::size_t i) {
        const double kappa0 = kappa_grid[i / gamma_grid.size()];
        const double gamma = gamma_grid[i % gamma_grid.size()];
        const LossModel losses{gamma, gamma, kExtraction};
        const Trajectory ap = propagate(make_scenario(
            Schedule::linear_chirp(kappa0, delta, kChirpRate, kChirpT0), losses, 201));
        const Trajectory st =
            propagate(make_scenario(Schedule::static_profile(kappa0, delta), losses, 201));
        maps.chirped.rows[i] = {kappa0, gamma, efficiency(ap, losses).eta};
        maps.static_resonant.rows[i] = {kappa0, gamma, efficiency(st, losses).eta};
    });
    return maps;
}

CoupledKappaStudy coupled_kappa_study() {
    const Schedule schedule = Schedule::detuning_coupled(5e4, 2e5, kChirpRate, kChirpT0);
    const LossModel losses{3e3, 3e3, 3e3};
    Scenario s = make_scenario(schedule, losses, 2001);
    CoupledKappaStudy study;
    study.trajectory = propagate(s);
    annotate_trajectory(study.trajectory, schedule);
    study.running_eta.resize(study.trajectory.size());
    for (std::size_t i = 0; i < study.trajectory.size(); ++i) {
        const double useful = losses.gamma_W * study.trajectory.acc_D[i];
        const double denom = losses.gamma_S * study.trajectory.acc_S[i] +
                             (losses.gamma_D + losses.gamma_W) * study.trajectory.acc_D[i];
        study.running_eta[i] =
            denom > 0.0 ? useful / denom : std::numeric_limits<double>::quiet_NaN();
    }
    return study;
}

CycleStudy repeated_cycles(int n_cycles, double t_rep, const LossModel& losses) {
    if (!(t_rep > 0.0)) throw std::domain_error("repeated_cycles requires t_rep > 0");
    const Schedule inner = Schedule::linear_chirp(4e4, 2e5, kChirpRate, kChirpT0);
    Scenario s = make_scenario(Schedule::cyclic(inner, t_rep), losses, 1001);
    s.t_end = t_rep * n_cycles;

    CycleStudy study;
    study.losses = losses;
    study.trajectory = propagate_cycles(s, n_cycles);
    annotate_trajectory(study.trajectory, s.schedule);

    const std::size_t per = static_cast<std::size_t>(s.sample_count) - 1;
    study.per_cycle.reserve(static_cast<std::size_t>(n_cycles));
    for (int c = 0; c < n_cycles; ++c) {
        const std::size_t lo = per * static_cast<std::size_t>(c);
        const std::size_t hi = lo + per;
        const double dS = study.trajectory.acc_S[hi] - study.trajectory.acc_S[lo];
        const double dD = study.trajectory.acc_D[hi] - study.trajectory.acc_D[lo];
        EfficiencyReport r;
        r.useful_energy = losses.gamma_W * dD;
        r.dissipated_source = losses.gamma_S * dS;
        r.dissipated_drain = losses.gamma_D * dD;
        r.horizon_T = t_rep;
        const double denom = r.useful_energy + r.dissipated_source + r.dissipated_drain;
        if (denom == 0.0) throw undefined_efficiency{};
        r.eta = r.useful_energy / denom;
        study.per_cycle.push_back(r);
    }
    study.cumulative = efficiency(study.trajectory, losses);
    return study;
}

} // namespace adiapower
