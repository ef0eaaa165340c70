#include "adiapower/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace adiapower {

namespace {

using State = std::array<double, 6>; // re aS, im aS, re aD, im aD, acc_S, acc_D

State eval_rhs(double t, const State& y, const Schedule& schedule,
               const LossModel& losses, RotatingFrame frame) {
    const SchedulePoint p = schedule.eval(t);
    const std::complex<double> aS{y[0], y[1]};
    const std::complex<double> aD{y[2], y[3]};
    // Phase coefficients multiply +i*a; only their difference (the detuning)
    // affects energies.
    const double phase_S = frame == RotatingFrame::Symmetric ? +0.5 * p.delta : 0.0;
    const double phase_D = frame == RotatingFrame::Symmetric ? -0.5 * p.delta : -p.delta;
    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> dS = i * phase_S * aS - losses.gamma_S * aS - i * p.kappa * aD;
    const std::complex<double> dD = i * phase_D * aD - (losses.gamma_D + losses.gamma_W) * aD - i * p.kappa * aS;
    return {dS.real(), dS.imag(), dD.real(), dD.imag(), std::norm(aS), std::norm(aD)};
}

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// Error coefficients: 5th-order weights minus the embedded 4th-order weights.
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695,
                 E4 = B4 - 393.0 / 640, E5 = B5 + 92097.0 / 339200,
                 E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

class Dopri5 {
public:
    Dopri5(const Schedule& schedule, const LossModel& losses, RotatingFrame frame,
           double rel_tol, double abs_tol, double max_step, double t_init, const State& y_init)
        : schedule_(schedule), losses_(losses), frame_(frame),
          rel_tol_(rel_tol), abs_tol_(abs_tol), max_step_(max_step),
          t_(t_init), y_(y_init), h_next_(0.5 * max_step) {
        f_ = eval_rhs(t_, y_, schedule_, losses_, frame_);
    }

    double t() const { return t_; }
    const State& y() const { return y_; }
    const State& f() const { return f_; }

    // Overwrite the state in place (cycle reload); refreshes the cached rhs.
    void reset_state(const State& y) {
        y_ = y;
        f_ = eval_rhs(t_, y_, schedule_, losses_, frame_);
    }

    // Advance to exactly t_target (> t()); the final step lands on it and the
    // cached rhs is re-evaluated there, so discontinuities at the target
    // never leak across it.
    void advance_to(double t_target) {
        int consecutive_rejects = 0;
        while (t_ < t_target) {
            bool landing = false;
            double h = h_next_;
            if (t_ + h >= t_target) {
                h = t_target - t_;
                landing = true;
            }
            if (!(h > 0.0) || h < std::fabs(t_) * 1e-16 || h < 1e-300)
                throw integration_error("step size underflow", t_);

            State y_new, f_new;
            const double err = attempt(h, y_new, f_new);
            if (err <= 1.0) {
                consecutive_rejects = 0;
                t_ = landing ? t_target : t_ + h;
                y_ = y_new;
                if (!all_finite(y_))
                    throw integration_error("state became nonfinite", t_);
                f_ = landing ? eval_rhs(t_, y_, schedule_, losses_, frame_) : f_new;
                if (!landing) {
                    // A landing step is clamped short; keep the controller's
                    // proposal so the next segment does not start tiny.
                    const double grow =
                        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                    h_next_ = std::min(h * grow, max_step_);
                }
            } else {
                if (++consecutive_rejects > 200)
                    throw integration_error("step repeatedly rejected", t_);
                const double shrink = std::isfinite(err)
                                          ? std::max(0.1, 0.9 * std::pow(err, -0.2))
                                          : 0.1;
                h_next_ = h * shrink;
            }
        }
    }

private:
    static bool all_finite(const State& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }

    // One trial step of size h; returns the scaled error norm (inf on NaN).
    double attempt(double h, State& y_new, State& f_new) const {
        State k2, k3, k4, k5, k6, tmp;
        const State& k1 = f_;
        for (int i = 0; i < 6; ++i) tmp[i] = y_[i] + h * A21 * k1[i];
        k2 = eval_rhs(t_ + C2 * h, tmp, schedule_, losses_, frame_);
        for (int i = 0; i < 6; ++i) tmp[i] = y_[i] + h * (A31 * k1[i] + A32 * k2[i]);
        k3 = eval_rhs(t_ + C3 * h, tmp, schedule_, losses_, frame_);
        for (int i = 0; i < 6; ++i)
            tmp[i] = y_[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        k4 = eval_rhs(t_ + C4 * h, tmp, schedule_, losses_, frame_);
        for (int i = 0; i < 6; ++i)
            tmp[i] = y_[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        k5 = eval_rhs(t_ + C5 * h, tmp, schedule_, losses_, frame_);
        for (int i = 0; i < 6; ++i)
            tmp[i] = y_[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] +
                                  A65 * k5[i]);
        k6 = eval_rhs(t_ + h, tmp, schedule_, losses_, frame_);
        for (int i = 0; i < 6; ++i)
            y_new[i] = y_[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] +
                                    B6 * k6[i]);
        f_new = eval_rhs(t_ + h, y_new, schedule_, losses_, frame_);

        double sum = 0.0;
        for (int i = 0; i < 6; ++i) {
            const double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                                  E6 * k6[i] + E7 * f_new[i]);
            const double scale =
                abs_tol_ + rel_tol_ * std::max(std::fabs(y_[i]), std::fabs(y_new[i]));
            sum += (e / scale) * (e / scale);
        }
        const double err = std::sqrt(sum / 6.0);
        return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
    }

    const Schedule& schedule_;
    const LossModel& losses_;
    RotatingFrame frame_;
    double rel_tol_, abs_tol_, max_step_;
    double t_;
    State y_;
    State f_;
    double h_next_;
};

double compute_max_step(const Schedule& schedule, double t_start, double t_end) {
    const double scale = std::max({schedule.base_kappa0(),
                                   schedule.max_abs_delta(t_start, t_end), 1.0});
    return 0.05 / scale;
}

State to_state(const CoilPair& p) {
    return {p.a_S.real(), p.a_S.imag(), p.a_D.real(), p.a_D.imag(), p.acc_S, p.acc_D};
}

void record_sample(Trajectory& out, double t, const State& y, const State& f,
                   const Schedule& schedule) {
    out.times.push_back(t);
    out.a_S.emplace_back(y[0], y[1]);
    out.a_D.emplace_back(y[2], y[3]);
    out.E_S.push_back(y[0] * y[0] + y[1] * y[1]);
    out.E_D.push_back(y[2] * y[2] + y[3] * y[3]);
    out.acc_S.push_back(y[4]);
    out.acc_D.push_back(y[5]);
    const SchedulePoint p = schedule.eval(t);
    out.kappa.push_back(p.kappa);
    out.delta.push_back(p.delta);
    out.da_S.emplace_back(f[0], f[1]);
    out.da_D.emplace_back(f[2], f[3]);
}

void reserve_all(Trajectory& out, std::size_t n) {
    out.times.reserve(n);
    out.a_S.reserve(n);
    out.a_D.reserve(n);
    out.E_S.reserve(n);
    out.E_D.reserve(n);
    out.acc_S.reserve(n);
    out.acc_D.reserve(n);
    out.kappa.reserve(n);
    out.delta.reserve(n);
    out.da_S.reserve(n);
    out.da_D.reserve(n);
}

// Sample instants and schedule breakpoints merged ascending; breakpoints
// within a rounding slack of a sample collapse onto the sample.
struct Stop {
    double t;
    bool is_sample;
};

std::vector<Stop> merge_stops(const std::vector<double>& samples,
                              const std::vector<double>& breaks, double slack) {
    std::vector<Stop> stops;
    stops.reserve(samples.size() + breaks.size());
    std::size_t i = 1, j = 0; // samples[0] is the initial condition, not a stop
    while (i < samples.size() || j < breaks.size()) {
        if (j >= breaks.size()) {
            stops.push_back({samples[i++], true});
        } else if (i >= samples.size()) {
            stops.push_back({breaks[j++], false});
        } else if (std::fabs(samples[i] - breaks[j]) <= slack) {
            stops.push_back({samples[i++], true});
            ++j;
        } else if (samples[i] < breaks[j]) {
            stops.push_back({samples[i++], true});
        } else {
            stops.push_back({breaks[j++], false});
        }
    }
    return stops;
}

std::vector<double> uniform_samples(double t_start, double t_end, int count) {
    std::vector<double> ts(static_cast<std::size_t>(count));
    const double span = t_end - t_start;
    for (int i = 0; i < count; ++i)
        ts[static_cast<std::size_t>(i)] = t_start + span * i / (count - 1);
    ts.back() = t_end;
    return ts;
}

double hermite(double s, double h, double y0, double y1, double m0, double m1) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

double acc_at(const Trajectory& traj, double T, const std::vector<double>& acc,
              const std::vector<double>& energy) {
    if (traj.times.size() < 2)
        throw std::domain_error("trajectory has no interpolation interval");
    const double lo = traj.times.front(), hi = traj.times.back();
    const double slack = 1e-9 * (hi - lo);
    if (T < lo - slack || T > hi + slack)
        throw std::domain_error("interpolation time outside trajectory span");
    T = std::clamp(T, lo, hi);
    auto it = std::upper_bound(traj.times.begin(), traj.times.end(), T);
    std::size_t k = static_cast<std::size_t>(it - traj.times.begin());
    k = std::clamp<std::size_t>(k, 1, traj.times.size() - 1) - 1;
    const double t0 = traj.times[k], t1 = traj.times[k + 1];
    const double h = t1 - t0;
    // d(acc)/dt is the sampled energy.
    return hermite((T - t0) / h, h, acc[k], acc[k + 1], energy[k], energy[k + 1]);
}

} // namespace

void Scenario::validate() const {
    schedule.validate();
    losses.validate();
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start))
        throw std::domain_error("scenario requires finite t_end > t_start");
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol) || !(abs_tol > 0.0) || !std::isfinite(abs_tol))
        throw std::domain_error("scenario requires positive finite tolerances");
    if (sample_count < 2)
        throw std::domain_error("scenario requires sample_count >= 2");
    if (!std::isfinite(initial.a_S.real()) || !std::isfinite(initial.a_S.imag()) ||
        !std::isfinite(initial.a_D.real()) || !std::isfinite(initial.a_D.imag()))
        throw std::domain_error("initial amplitudes must be finite");
    if (!std::isfinite(initial.acc_S) || initial.acc_S < 0.0 ||
        !std::isfinite(initial.acc_D) || initial.acc_D < 0.0)
        throw std::domain_error("initial accumulators must be finite and >= 0");
}

double Trajectory::acc_S_at(double T) const { return acc_at(*this, T, acc_S, E_S); }
double Trajectory::acc_D_at(double T) const { return acc_at(*this, T, acc_D, E_D); }

CoilPair rhs(double t, const CoilPair& state, const Schedule& schedule,
             const LossModel& losses, RotatingFrame frame) {
    const State d = eval_rhs(t, to_state(state), schedule, losses, frame);
    CoilPair out;
    out.a_S = {d[0], d[1]};
    out.a_D = {d[2], d[3]};
    out.acc_S = d[4];
    out.acc_D = d[5];
    return out;
}

Trajectory propagate(const Scenario& scenario, RotatingFrame frame) {
    scenario.validate();
    const double max_step = compute_max_step(scenario.schedule, scenario.t_start, scenario.t_end);
    const std::vector<double> samples =
        uniform_samples(scenario.t_start, scenario.t_end, scenario.sample_count);
    const double slack = (scenario.t_end - scenario.t_start) * 1e-12;
    const std::vector<Stop> stops =
        merge_stops(samples, scenario.schedule.breakpoints(scenario.t_start, scenario.t_end), slack);

    Dopri5 solver(scenario.schedule, scenario.losses, frame, scenario.rel_tol,
                  scenario.abs_tol, max_step, scenario.t_start, to_state(scenario.initial));

    Trajectory out;
    reserve_all(out, samples.size());
    record_sample(out, solver.t(), solver.y(), solver.f(), scenario.schedule);
    for (const Stop& stop : stops) {
        solver.advance_to(stop.t);
        if (stop.is_sample)
            record_sample(out, solver.t(), solver.y(), solver.f(), scenario.schedule);
    }
    return out;
}

Trajectory propagate_cycles(const Scenario& scenario, int n_cycles) {
    scenario.validate();
    if (scenario.schedule.variant != ScheduleVariant::Cyclic)
        throw std::domain_error("propagate_cycles requires a cyclic schedule");
    if (scenario.t_start != 0.0)
        throw std::domain_error("propagate_cycles requires t_start = 0");
    if (n_cycles < 1)
        throw std::domain_error("propagate_cycles requires n_cycles >= 1");

    const double period = scenario.schedule.period;
    const int m = scenario.sample_count;
    const double total = period * n_cycles;
    const double max_step = compute_max_step(scenario.schedule, 0.0, total);
    const std::vector<double> breaks = scenario.schedule.breakpoints(0.0, total);
    const double slack = period * 1e-12;

    Dopri5 solver(scenario.schedule, scenario.losses, RotatingFrame::Symmetric,
                  scenario.rel_tol, scenario.abs_tol, max_step, 0.0,
                  to_state(scenario.initial));

    Trajectory out;
    reserve_all(out, static_cast<std::size_t>(n_cycles) * (m - 1) + 1);
    record_sample(out, 0.0, solver.y(), solver.f(), scenario.schedule);

    std::size_t bi = 0;
    for (int cycle = 0; cycle < n_cycles; ++cycle) {
        for (int j = 1; j < m; ++j) {
            const double target = j == m - 1 ? period * (cycle + 1)
                                             : period * cycle + period * j / (m - 1);
            while (bi < breaks.size() && breaks[bi] < target - slack)
                solver.advance_to(breaks[bi++]);
            if (bi < breaks.size() && std::fabs(breaks[bi] - target) <= slack) ++bi;
            solver.advance_to(target);
            const bool boundary = j == m - 1;
            if (boundary && cycle < n_cycles - 1) {
                State y = solver.y();
                const double e_before = y[0] * y[0] + y[1] * y[1];
                y[0] = 1.0;
                y[1] = 0.0;
                solver.reset_state(y);
                out.reloads.push_back({solver.t(), e_before, 1.0 - e_before});
            }
            record_sample(out, solver.t(), solver.y(), solver.f(), scenario.schedule);
        }
    }
    return out;
}

} // namespace adiapower
