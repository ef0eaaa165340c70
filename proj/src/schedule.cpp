#include "adiapower/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adiapower {

namespace {

double wrap_phase(double t, double period) {
    double u = std::fmod(t, period);
    if (u < 0.0) u += period;
    return u;
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v))
        throw std::domain_error(std::string("schedule field ") + name + " must be finite");
}

} // namespace

Schedule Schedule::static_profile(double kappa0, double delta) {
    Schedule s;
    s.variant = ScheduleVariant::Static;
    s.kappa0 = kappa0;
    s.delta = delta;
    s.validate();
    return s;
}

Schedule Schedule::linear_chirp(double kappa0, double delta, double beta, double t0) {
    Schedule s;
    s.variant = ScheduleVariant::LinearChirp;
    s.kappa0 = kappa0;
    s.delta = delta;
    s.beta = beta;
    s.t0 = t0;
    s.validate();
    return s;
}

Schedule Schedule::detuning_coupled(double kappa0, double delta, double beta, double t0) {
    Schedule s;
    s.variant = ScheduleVariant::DetuningCoupled;
    s.kappa0 = kappa0;
    s.delta = delta;
    s.beta = beta;
    s.t0 = t0;
    s.validate();
    return s;
}

Schedule Schedule::cyclic(Schedule inner, double period) {
    Schedule s;
    s.variant = ScheduleVariant::Cyclic;
    s.period = period;
    s.inner = std::make_shared<const Schedule>(std::move(inner));
    s.validate();
    return s;
}

void Schedule::validate() const {
    require_finite(kappa0, "kappa0");
    require_finite(delta, "delta");
    require_finite(beta, "beta");
    require_finite(t0, "t0");
    if (variant == ScheduleVariant::Cyclic) {
        if (!std::isfinite(period) || period <= 0.0)
            throw std::domain_error("cyclic schedule requires period > 0");
        if (!inner)
            throw std::domain_error("cyclic schedule requires an inner schedule");
        if (inner->variant == ScheduleVariant::Cyclic)
            throw std::domain_error("cyclic schedules must not nest");
        inner->validate();
    } else {
        if (kappa0 < 0.0)
            throw std::domain_error("schedule requires kappa0 >= 0");
    }
}

SchedulePoint Schedule::eval(double t) const {
    switch (variant) {
    case ScheduleVariant::Static:
        return {kappa0, delta};
    case ScheduleVariant::LinearChirp:
        return {kappa0, delta + beta * (t - t0)};
    case ScheduleVariant::DetuningCoupled: {
        const double d = delta + beta * (t - t0);
        return {std::max(0.0, kappa0 - std::sqrt(std::fabs(d))), d};
    }
    case ScheduleVariant::Cyclic:
        return inner->eval(wrap_phase(t, period));
    }
    throw std::logic_error("unreachable schedule variant");
}

ScheduleDerivatives Schedule::eval_derivatives(double t) const {
    switch (variant) {
    case ScheduleVariant::Static:
        return {0.0, 0.0, false};
    case ScheduleVariant::LinearChirp:
        return {0.0, beta, false};
    case ScheduleVariant::DetuningCoupled: {
        const double d = delta + beta * (t - t0);
        if (d == 0.0) {
            // Cusp of sqrt|Delta|: the one-sided slope diverges, but
            // dkappa*Delta -> 0 there, so 0 keeps the adiabaticity ratio at
            // its continuous limit.
            return {0.0, beta, true};
        }
        const double root = std::sqrt(std::fabs(d));
        if (kappa0 - root < 0.0)
            return {0.0, beta, false}; // clamped flat at kappa = 0
        const double dkappa = -(d > 0.0 ? 1.0 : -1.0) * beta / (2.0 * root);
        const bool at_clamp_boundary = (kappa0 - root == 0.0);
        return {at_clamp_boundary ? 0.0 : dkappa, beta, at_clamp_boundary};
    }
    case ScheduleVariant::Cyclic: {
        const double u = wrap_phase(t, period);
        ScheduleDerivatives d = inner->eval_derivatives(u);
        if (u == 0.0 && t != 0.0) d.one_sided = true; // period wrap jump
        return d;
    }
    }
    throw std::logic_error("unreachable schedule variant");
}

std::optional<double> Schedule::resonance_crossing() const {
    if (variant != ScheduleVariant::LinearChirp && variant != ScheduleVariant::DetuningCoupled)
        return std::nullopt;
    if (beta == 0.0) return std::nullopt;
    return t0 - delta / beta;
}

double Schedule::base_kappa0() const {
    return variant == ScheduleVariant::Cyclic ? inner->kappa0 : kappa0;
}

double Schedule::max_abs_delta(double t_from, double t_to) const {
    switch (variant) {
    case ScheduleVariant::Static:
        return std::fabs(delta);
    case ScheduleVariant::LinearChirp:
    case ScheduleVariant::DetuningCoupled: {
        const double a = delta + beta * (t_from - t0);
        const double b = delta + beta * (t_to - t0);
        return std::max(std::fabs(a), std::fabs(b));
    }
    case ScheduleVariant::Cyclic:
        return inner->max_abs_delta(0.0, period);
    }
    throw std::logic_error("unreachable schedule variant");
}

std::vector<double> Schedule::breakpoints(double t_from, double t_to) const {
    std::vector<double> pts;
    auto add_if_inside = [&](double t) {
        if (t > t_from && t < t_to) pts.push_back(t);
    };
    switch (variant) {
    case ScheduleVariant::Static:
    case ScheduleVariant::LinearChirp:
        break;
    case ScheduleVariant::DetuningCoupled: {
        if (beta == 0.0) break;
        add_if_inside(t0 - delta / beta); // sqrt cusp at Delta = 0
        // clamp boundaries at |Delta| = kappa0^2
        add_if_inside(t0 + (kappa0 * kappa0 - delta) / beta);
        add_if_inside(t0 + (-kappa0 * kappa0 - delta) / beta);
        break;
    }
    case ScheduleVariant::Cyclic: {
        const std::vector<double> inner_pts = inner->breakpoints(0.0, period);
        const long k_lo = static_cast<long>(std::floor(t_from / period));
        const long k_hi = static_cast<long>(std::ceil(t_to / period));
        for (long k = k_lo; k <= k_hi; ++k) {
            const double base = static_cast<double>(k) * period;
            add_if_inside(base); // wrap instant
            for (double p : inner_pts) add_if_inside(base + p);
        }
        break;
    }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace adiapower
