#include "adiapower/config.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace adiapower {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw config_error(std::string("unknown key \"") + item.key() + "\" in " + where);
    }
}

double get_number(const json& obj, const char* where, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw config_error(std::string("missing key \"") + key + "\" in " + where);
    if (!it->is_number())
        throw config_error(std::string("key \"") + key + "\" in " + where + " must be a number");
    return it->get<double>();
}

double get_number_or(const json& obj, const char* where, const char* key, double fallback) {
    return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

bool get_bool_or(const json& obj, const char* where, const char* key, bool fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean())
        throw config_error(std::string("key \"") + key + "\" in " + where + " must be a boolean");
    return it->get<bool>();
}

Schedule parse_schedule(const json& obj, const char* where, bool allow_cyclic) {
    if (!obj.is_object())
        throw config_error(std::string(where) + " must be an object");
    reject_unknown_keys(obj, where,
                        {"variant", "kappa0", "delta", "beta", "t0", "period", "inner"});
    const auto vit = obj.find("variant");
    if (vit == obj.end() || !vit->is_string())
        throw config_error(std::string(where) + " requires a string \"variant\"");
    const std::string variant = vit->get<std::string>();

    auto forbid = [&](const char* key) {
        if (obj.contains(key))
            throw config_error(std::string("key \"") + key + "\" in " + where +
                               " does not apply to variant \"" + variant + "\"");
    };

    try {
        if (variant == "static") {
            forbid("beta");
            forbid("t0");
            forbid("period");
            forbid("inner");
            return Schedule::static_profile(get_number(obj, where, "kappa0"),
                                            get_number_or(obj, where, "delta", 0.0));
        }
        if (variant == "linear_chirp" || variant == "detuning_coupled") {
            forbid("period");
            forbid("inner");
            const double kappa0 = get_number(obj, where, "kappa0");
            const double delta = get_number_or(obj, where, "delta", 0.0);
            const double beta = get_number(obj, where, "beta");
            const double t0 = get_number_or(obj, where, "t0", 0.0);
            return variant == "linear_chirp"
                       ? Schedule::linear_chirp(kappa0, delta, beta, t0)
                       : Schedule::detuning_coupled(kappa0, delta, beta, t0);
        }
        if (variant == "cyclic") {
            if (!allow_cyclic)
                throw config_error("cyclic schedules must not nest");
            forbid("kappa0");
            forbid("delta");
            forbid("beta");
            forbid("t0");
            const auto iit = obj.find("inner");
            if (iit == obj.end())
                throw config_error(std::string(where) + " with variant \"cyclic\" requires \"inner\"");
            Schedule inner = parse_schedule(*iit, "schedule.inner", false);
            return Schedule::cyclic(std::move(inner), get_number(obj, where, "period"));
        }
    } catch (const std::domain_error& e) {
        throw config_error(std::string("invalid ") + where + ": " + e.what());
    }
    throw config_error(std::string("unknown schedule variant \"") + variant +
                       "\" (expected static, linear_chirp, detuning_coupled, or cyclic)");
}

} // namespace

ConfigDocument parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw config_error("config root must be a JSON object");
    reject_unknown_keys(root, "config",
                        {"schedule", "losses", "t_start", "t_end", "initial", "rel_tol",
                         "abs_tol", "sample_count", "output"});

    ConfigDocument doc;
    if (!root.contains("schedule"))
        throw config_error("missing key \"schedule\" in config");
    doc.scenario.schedule = parse_schedule(root["schedule"], "schedule", true);

    if (root.contains("losses")) {
        const json& l = root["losses"];
        if (!l.is_object()) throw config_error("\"losses\" must be an object");
        reject_unknown_keys(l, "losses", {"gamma_S", "gamma_D", "gamma_W"});
        doc.scenario.losses.gamma_S = get_number_or(l, "losses", "gamma_S", 0.0);
        doc.scenario.losses.gamma_D = get_number_or(l, "losses", "gamma_D", 0.0);
        doc.scenario.losses.gamma_W = get_number_or(l, "losses", "gamma_W", 0.0);
    }

    doc.scenario.t_start = get_number_or(root, "config", "t_start", 0.0);
    doc.scenario.t_end = get_number(root, "config", "t_end");

    if (root.contains("initial")) {
        const json& ini = root["initial"];
        if (!ini.is_object()) throw config_error("\"initial\" must be an object");
        reject_unknown_keys(ini, "initial", {"re_aS", "im_aS", "re_aD", "im_aD"});
        doc.scenario.initial.a_S = {get_number_or(ini, "initial", "re_aS", 1.0),
                                    get_number_or(ini, "initial", "im_aS", 0.0)};
        doc.scenario.initial.a_D = {get_number_or(ini, "initial", "re_aD", 0.0),
                                    get_number_or(ini, "initial", "im_aD", 0.0)};
    }

    doc.scenario.rel_tol = get_number_or(root, "config", "rel_tol", 1e-9);
    doc.scenario.abs_tol = get_number_or(root, "config", "abs_tol", 1e-12);
    const double samples = get_number_or(root, "config", "sample_count", 2001.0);
    if (samples != static_cast<double>(static_cast<int>(samples)))
        throw config_error("\"sample_count\" must be an integer");
    doc.scenario.sample_count = static_cast<int>(samples);

    if (root.contains("output")) {
        const json& out = root["output"];
        if (!out.is_object()) throw config_error("\"output\" must be an object");
        reject_unknown_keys(out, "output", {"directory", "svg", "emit_diagnostics"});
        if (out.contains("directory")) {
            if (!out["directory"].is_string())
                throw config_error("key \"directory\" in output must be a string");
            doc.output.directory = out["directory"].get<std::string>();
        }
        doc.output.svg = get_bool_or(out, "output", "svg", false);
        doc.output.emit_diagnostics = get_bool_or(out, "output", "emit_diagnostics", true);
    }

    try {
        doc.scenario.validate();
    } catch (const std::domain_error& e) {
        throw config_error(std::string("invalid scenario: ") + e.what());
    }
    return doc;
}

ConfigDocument load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string write_config(const ConfigDocument& doc) {
    json sched;
    const Schedule& s = doc.scenario.schedule;
    auto fill_flat = [](json& j, const Schedule& sc) {
        switch (sc.variant) {
        case ScheduleVariant::Static:
            j["variant"] = "static";
            j["kappa0"] = sc.kappa0;
            j["delta"] = sc.delta;
            break;
        case ScheduleVariant::LinearChirp:
        case ScheduleVariant::DetuningCoupled:
            j["variant"] = sc.variant == ScheduleVariant::LinearChirp ? "linear_chirp"
                                                                      : "detuning_coupled";
            j["kappa0"] = sc.kappa0;
            j["delta"] = sc.delta;
            j["beta"] = sc.beta;
            j["t0"] = sc.t0;
            break;
        case ScheduleVariant::Cyclic:
            break;
        }
    };
    if (s.variant == ScheduleVariant::Cyclic) {
        sched["variant"] = "cyclic";
        sched["period"] = s.period;
        json inner;
        fill_flat(inner, *s.inner);
        sched["inner"] = inner;
    } else {
        fill_flat(sched, s);
    }

    json root;
    root["schedule"] = sched;
    root["losses"] = {{"gamma_S", doc.scenario.losses.gamma_S},
                      {"gamma_D", doc.scenario.losses.gamma_D},
                      {"gamma_W", doc.scenario.losses.gamma_W}};
    root["t_start"] = doc.scenario.t_start;
    root["t_end"] = doc.scenario.t_end;
    root["initial"] = {{"re_aS", doc.scenario.initial.a_S.real()},
                       {"im_aS", doc.scenario.initial.a_S.imag()},
                       {"re_aD", doc.scenario.initial.a_D.real()},
                       {"im_aD", doc.scenario.initial.a_D.imag()}};
    root["rel_tol"] = doc.scenario.rel_tol;
    root["abs_tol"] = doc.scenario.abs_tol;
    root["sample_count"] = doc.scenario.sample_count;
    root["output"] = {{"directory", doc.output.directory},
                      {"svg", doc.output.svg},
                      {"emit_diagnostics", doc.output.emit_diagnostics}};
    return root.dump(2) + "\n";
}

} // namespace adiapower
