#include "adiapower/cli.hpp"

#include "adiapower/adiabatic.hpp"
#include "adiapower/config.hpp"
#include "adiapower/experiments.hpp"
#include "adiapower/io.hpp"
#include "adiapower/metrics.hpp"
#include "adiapower/propagator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>

namespace adiapower::cli {

namespace {

namespace fs = std::filesystem;

std::string prepare_output_path(const std::string& directory, const std::string& filename) {
    const fs::path dir = directory.empty() ? fs::path(".") : fs::path(directory);
    fs::create_directories(dir);
    return (dir / filename).string();
}

struct RatioScan {
    double r_max;
    double t_at_max;
};

RatioScan scan_adiabaticity(const Scenario& scenario) {
    RatioScan best{-1.0, scenario.t_start};
    const int n = scenario.sample_count;
    const double span = scenario.t_end - scenario.t_start;
    for (int i = 0; i < n; ++i) {
        double t = scenario.t_start + span * i / (n - 1);
        if (i == n - 1) t = scenario.t_end;
        const double r = adiabaticity_ratio(scenario.schedule, t);
        if (r > best.r_max) best = {r, t};
    }
    return best;
}

void print_hierarchy(std::ostream& out, const HierarchyReport& h) {
    out << "hierarchy: gamma_max = " << format_double(h.gamma_max)
        << (h.loss_below_coupling ? " < " : " !< ") << "kappa0 = " << format_double(h.kappa0)
        << (h.coupling_below_detuning ? " < " : " !< ")
        << "|delta|_min = " << format_double(h.delta_min_abs) << " -> "
        << (h.satisfied() ? "satisfied" : "violated") << "\n";
}

void print_efficiency(std::ostream& out, const Trajectory& traj, const LossModel& losses) {
    if (losses.gamma_W == 0.0) {
        out << "eta = undefined (gamma_W = 0)\n";
        return;
    }
    try {
        const EfficiencyReport r = efficiency(traj, losses);
        out << "eta = " << format_double(r.eta) << "\n";
        out << "useful_energy = " << format_double(r.useful_energy) << "\n";
    } catch (const undefined_efficiency&) {
        out << "eta = undefined (zero denominator)\n";
    }
}

int cmd_simulate(const std::string& config_path, const std::optional<std::string>& out_dir,
                 bool svg, std::ostream& out) {
    ConfigDocument doc = load_config(config_path);
    if (out_dir) doc.output.directory = *out_dir;
    if (svg) doc.output.svg = true;

    Trajectory traj = propagate(doc.scenario);
    annotate_trajectory(traj, doc.scenario.schedule);

    out << "final E_S = " << format_double(traj.E_S.back()) << "\n";
    out << "final E_D = " << format_double(traj.E_D.back()) << "\n";
    print_efficiency(out, traj, doc.scenario.losses);
    if (doc.output.emit_diagnostics) {
        const std::size_t i_max = static_cast<std::size_t>(
            std::max_element(traj.ratio.begin(), traj.ratio.end()) - traj.ratio.begin());
        out << "r_max = " << format_double(traj.ratio[i_max])
            << " at t = " << format_double(traj.times[i_max]) << "\n";
        print_hierarchy(out, hierarchy_check(doc.scenario.losses, doc.scenario.schedule,
                                             doc.scenario.t_start, doc.scenario.t_end));
    }

    const std::string csv_path = prepare_output_path(doc.output.directory, "trajectory.csv");
    write_text_file(csv_path, trajectory_csv(traj));
    out << "wrote " << csv_path << "\n";
    if (doc.output.svg) {
        const std::string svg_path = prepare_output_path(doc.output.directory, "trajectory.svg");
        write_text_file(svg_path, trajectory_svg(traj));
        out << "wrote " << svg_path << "\n";
    }
    return kExitOk;
}

struct GridOverride {
    std::optional<double> lo, hi;
    std::optional<int> n;
};

int cmd_sweep(const std::string& study, const GridOverride& grid,
              const std::string& out_dir, std::ostream& out, std::ostream& err) {
    std::string csv;
    std::size_t n_rows = 0;
    if (study == "fig4-near" || study == "fig4-far") {
        std::vector<double> deltas = default_detuning_grid();
        if (grid.lo || grid.hi || grid.n)
            deltas = linear_grid(grid.lo.value_or(-2e5), grid.hi.value_or(2e5),
                                 grid.n.value_or(81));
        const SweepResult r = detuning_sweep(
            deltas, study == "fig4-near" ? DistancePreset::Near : DistancePreset::Far);
        csv = to_csv(r.columns, r.rows);
        n_rows = r.rows.size();
    } else if (study == "fig5") {
        std::vector<double> kappas = default_coupling_grid();
        if (grid.lo || grid.hi || grid.n)
            kappas = log_grid(grid.lo.value_or(1e4), grid.hi.value_or(1e5), grid.n.value_or(41));
        const RobustnessMaps maps = robustness_map(kappas, default_loss_grid());
        std::vector<std::vector<double>> rows(maps.chirped.rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            rows[i] = {maps.chirped.rows[i][0], maps.chirped.rows[i][1],
                       maps.chirped.rows[i][2], maps.static_resonant.rows[i][2]};
        csv = to_csv({"kappa0", "gamma", "eta_ap", "eta_static"}, rows);
        n_rows = rows.size();
    } else {
        err << "unknown study \"" << study << "\" (expected fig4-near, fig4-far, or fig5)\n";
        return kExitConfigError;
    }
    const std::string path = prepare_output_path(out_dir, study + ".csv");
    write_text_file(path, csv);
    out << "wrote " << path << " (" << n_rows << " rows)\n";
    return kExitOk;
}

int cmd_diagnose(const std::string& config_path, std::ostream& out) {
    const ConfigDocument doc = load_config(config_path);
    const RatioScan scan = scan_adiabaticity(doc.scenario);
    out << "r_max = " << format_double(scan.r_max)
        << " at t = " << format_double(scan.t_at_max) << "\n";
    if (const auto crossing = doc.scenario.schedule.resonance_crossing())
        out << "resonance crossing at t = " << format_double(*crossing) << "\n";
    else
        out << "no resonance crossing\n";
    const HierarchyReport h = hierarchy_check(doc.scenario.losses, doc.scenario.schedule,
                                              doc.scenario.t_start, doc.scenario.t_end);
    print_hierarchy(out, h);
    const bool ok = h.satisfied() && scan.r_max < 0.5;
    out << "adiabaticity: " << (ok ? "ok" : "marginal") << "\n";
    return ok ? kExitOk : kExitMarginal;
}

int cmd_cycles(const std::string& config_path, int n_cycles, std::optional<double> t_rep,
               const std::optional<std::string>& out_dir, std::ostream& out) {
    ConfigDocument doc = load_config(config_path);
    if (out_dir) doc.output.directory = *out_dir;
    Scenario s = doc.scenario;
    if (s.t_start != 0.0)
        throw config_error("cycles require t_start = 0");

    if (s.schedule.variant == ScheduleVariant::Cyclic) {
        if (t_rep) {
            Schedule inner = *s.schedule.inner;
            s.schedule = Schedule::cyclic(std::move(inner), *t_rep);
        }
    } else {
        if (!t_rep)
            throw config_error("cycles with a non-cyclic schedule require --trep");
        s.schedule = Schedule::cyclic(std::move(s.schedule), *t_rep);
    }
    const double period = s.schedule.period;
    s.t_end = period * n_cycles;

    Trajectory traj = propagate_cycles(s, n_cycles);
    annotate_trajectory(traj, s.schedule);

    const LossModel& losses = s.losses;
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(n_cycles));
    const std::size_t per = static_cast<std::size_t>(s.sample_count) - 1;
    for (int c = 0; c < n_cycles; ++c) {
        const std::size_t lo = per * static_cast<std::size_t>(c), hi = lo + per;
        const double injected = c == 0 ? traj.E_S.front()
                                       : traj.reloads[static_cast<std::size_t>(c) - 1].injected;
        const double dS = traj.acc_S[hi] - traj.acc_S[lo];
        const double dD = traj.acc_D[hi] - traj.acc_D[lo];
        const double useful = losses.gamma_W * dD;
        const double denom = useful + losses.gamma_S * dS + losses.gamma_D * dD;
        const double eta = denom > 0.0 ? useful / denom
                                       : std::numeric_limits<double>::quiet_NaN();
        rows.push_back({static_cast<double>(c), traj.times[lo], traj.times[hi], injected,
                        dS, dD, useful, eta});
    }
    const std::string cycles_path = prepare_output_path(doc.output.directory, "cycles.csv");
    write_text_file(cycles_path,
                    to_csv({"cycle", "t_start", "t_end", "injected", "acc_S_delta",
                            "acc_D_delta", "useful", "eta"},
                           rows));
    const std::string traj_path = prepare_output_path(doc.output.directory, "trajectory.csv");
    write_text_file(traj_path, trajectory_csv(traj));

    out << "cycles = " << n_cycles << ", period = " << format_double(period) << "\n";
    print_efficiency(out, traj, losses);
    out << "wrote " << cycles_path << "\n";
    out << "wrote " << traj_path << "\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coupled-coil wireless power transfer simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    bool svg = false;
    auto* simulate = app.add_subcommand("simulate", "Integrate one scenario and write trajectory.csv");
    simulate->add_option("config", config_path, "JSON scenario config")->required();
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_flag("--svg", svg, "also write trajectory.svg");

    std::string study;
    GridOverride grid;
    std::string sweep_out = ".";
    auto* sweep = app.add_subcommand("sweep", "Run a named parameter study and write its CSV");
    sweep->add_option("study", study, "one of: fig4-near, fig4-far, fig5")->required();
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--grid-min", grid.lo, "override swept-axis minimum");
    sweep->add_option("--grid-max", grid.hi, "override swept-axis maximum");
    sweep->add_option("--grid-n", grid.n, "override swept-axis point count");

    std::string diag_config;
    auto* diagnose = app.add_subcommand("diagnose", "Report adiabaticity and rate-ordering checks");
    diagnose->add_option("config", diag_config, "JSON scenario config")->required();

    std::string cycles_config;
    int n_cycles = 1;
    std::optional<double> t_rep;
    std::optional<std::string> cycles_out;
    auto* cycles = app.add_subcommand("cycles", "Integrate repeated recharge cycles");
    cycles->add_option("config", cycles_config, "JSON scenario config")->required();
    cycles->add_option("--n", n_cycles, "number of cycles")->required()->check(CLI::PositiveNumber);
    cycles->add_option("--trep", t_rep, "repetition period, s")->check(CLI::PositiveNumber);
    cycles->add_option("--out", cycles_out, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir, svg, out);
        if (sweep->parsed()) return cmd_sweep(study, grid, sweep_out, out, err);
        if (diagnose->parsed()) return cmd_diagnose(diag_config, out);
        if (cycles->parsed()) return cmd_cycles(cycles_config, n_cycles, t_rep, cycles_out, out);
    } catch (const integration_error& e) {
        err << "solver failure at t = " << format_double(e.failure_time) << ": " << e.what()
            << "\n";
        return kExitSolverFailure;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    err << "no subcommand given\n";
    return kExitConfigError;
}

} // namespace adiapower::cli
