// SPDX-License-Identifier: Apache-2.0

#include "oam/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "oam/errors.hpp"

namespace oam {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(where) + ": expected an object");
    }
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (auto a : allowed) {
            ok = ok || item.key() == a;
        }
        if (!ok) {
            throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
        }
    }
}

double number(const json& obj, const char* key, std::string_view where, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(std::string(where) + "." + key + ": expected a number");
    }
    return v.get<double>();
}

int integer(const json& obj, const char* key, std::string_view where, int fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(std::string(where) + "." + key + ": expected an integer");
    }
    return v.get<int>();
}

std::string string(const json& obj, const char* key, std::string_view where, const std::string& fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_string()) {
        throw ConfigError(std::string(where) + "." + key + ": expected a string");
    }
    return v.get<std::string>();
}

template <typename T>
std::vector<T> list(const json& obj, const char* key, std::string_view where, std::vector<T> fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_array()) {
        throw ConfigError(std::string(where) + "." + key + ": expected an array");
    }
    std::vector<T> out;
    for (const auto& e : v) {
        if constexpr (std::is_integral_v<T>) {
            if (!e.is_number_integer()) {
                throw ConfigError(std::string(where) + "." + key + ": expected integers");
            }
        } else if (!e.is_number()) {
            throw ConfigError(std::string(where) + "." + key + ": expected numbers");
        }
        out.push_back(e.get<T>());
    }
    return out;
}

void read_link(const json& j, LinkConfig& l) {
    constexpr std::string_view w = "link";
    check_keys(j, w,
               {"tx_power_w", "bandwidth_hz", "noise_w", "rx_gain", "rx_radius_m", "distance_m", "modes",
                "residual_divergence_deg"});
    l.tx_power = number(j, "tx_power_w", w, l.tx_power);
    l.bandwidth = number(j, "bandwidth_hz", w, l.bandwidth);
    l.noise = number(j, "noise_w", w, l.noise);
    l.rx_gain = number(j, "rx_gain", w, l.rx_gain);
    l.rx_radius = number(j, "rx_radius_m", w, l.rx_radius);
    l.distance = number(j, "distance_m", w, l.distance);
    l.modes = list<int>(j, "modes", w, l.modes);
    l.residual_divergence = deg_to_rad(number(j, "residual_divergence_deg", w, rad_to_deg(l.residual_divergence)));
}

void read_uca(const json& j, UcaGeometry& u) {
    constexpr std::string_view w = "uca";
    check_keys(j, w, {"n_elements", "radius_m", "frequency_hz", "bessel_argument_factor"});
    u.n_elements = integer(j, "n_elements", w, u.n_elements);
    u.radius = number(j, "radius_m", w, u.radius);
    u.frequency = number(j, "frequency_hz", w, u.frequency);
    u.bessel_argument_factor = number(j, "bessel_argument_factor", w, u.bessel_argument_factor);
}

void read_gains(const json& j, SystemConfig& s) {
    constexpr std::string_view w = "gains";
    check_keys(j, w, {"converged_gain_dbi", "divergent_peak_gain_dbi"});
    s.converged_gain_dbi = number(j, "converged_gain_dbi", w, s.converged_gain_dbi);
    s.divergent_peak_gain_dbi = list<double>(j, "divergent_peak_gain_dbi", w, s.divergent_peak_gain_dbi);
}

void read_lens(const json& j, SystemConfig& s) {
    constexpr std::string_view w = "lens";
    check_keys(j, w,
               {"eps_r", "mu_r", "focal_m", "sizing", "balance", "attenuation_per_mm", "energy_ratio",
                "attenuation_mode", "theta_source"});
    s.eps_r = number(j, "eps_r", w, s.eps_r);
    s.mu_r = number(j, "mu_r", w, s.mu_r);
    s.focal = number(j, "focal_m", w, s.focal);
    s.balance = number(j, "balance", w, s.balance);
    s.attenuation_per_mm = number(j, "attenuation_per_mm", w, s.attenuation_per_mm);
    s.energy_ratio = number(j, "energy_ratio", w, s.energy_ratio);

    const auto sizing = string(j, "sizing", w, "fixed_balance");
    if (sizing == "fixed_balance") {
        s.sizing = LensSizing::FixedBalance;
    } else if (sizing == "cover_modes") {
        s.sizing = LensSizing::CoverModes;
    } else {
        throw ConfigError("lens.sizing: expected fixed_balance or cover_modes, got '" + sizing + "'");
    }
    const auto mode = string(j, "attenuation_mode", w, "linear");
    if (mode == "linear") {
        s.attenuation_mode = AttenuationMode::Linear;
    } else if (mode == "exponential") {
        s.attenuation_mode = AttenuationMode::Exponential;
    } else {
        throw ConfigError("lens.attenuation_mode: expected linear or exponential, got '" + mode + "'");
    }
    const auto source = string(j, "theta_source", w, "power_law");
    if (source == "power_law") {
        s.theta_source = ThetaSource::PowerLaw;
    } else if (source == "rational") {
        s.theta_source = ThetaSource::Rational;
    } else if (source == "pattern") {
        s.theta_source = ThetaSource::Pattern;
    } else {
        throw ConfigError("lens.theta_source: expected power_law, rational or pattern, got '" + source + "'");
    }
}

void read_bifocal(const json& j, SystemConfig& s) {
    constexpr std::string_view w = "bifocal";
    check_keys(j, w, {"rho", "m_int", "rho_target"});
    if (j.contains("rho")) {
        s.rho = number(j, "rho", w, 0.0);
    }
    if (j.contains("m_int")) {
        s.m_int = integer(j, "m_int", w, 0);
    }
    if (j.contains("rho_target")) {
        s.rho_target = number(j, "rho_target", w, 0.0);
    }
}

} // namespace

Scenario parse_scenario(const std::string& name) {
    if (name == "divergent") {
        return Scenario::Divergent;
    }
    if (name == "converged") {
        return Scenario::Converged;
    }
    if (name == "bifocal") {
        return Scenario::Bifocal;
    }
    throw ConfigError("scenario: expected divergent, converged or bifocal, got '" + name + "'");
}

SweepVariable parse_sweep_variable(const std::string& name) {
    if (name == "distance") {
        return SweepVariable::Distance;
    }
    if (name == "focal") {
        return SweepVariable::Focal;
    }
    if (name == "uca_radius") {
        return SweepVariable::UcaRadius;
    }
    throw ConfigError("sweep.variable: expected distance, focal or uca_radius, got '" + name + "'");
}

CapacityRun parse_capacity_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    check_keys(root, "config", {"scenario", "sweep", "link", "uca", "gains", "lens", "bifocal"});
    CapacityRun run;
    if (!root.contains("scenario")) {
        throw ConfigError("config.scenario is required");
    }
    run.scenario = parse_scenario(string(root, "scenario", "config", ""));
    if (!root.contains("sweep")) {
        throw ConfigError("config.sweep is required");
    }
    const auto& sw = root.at("sweep");
    check_keys(sw, "sweep", {"variable", "start_m", "stop_m", "steps"});
    for (const char* key : {"variable", "start_m", "stop_m"}) {
        if (!sw.contains(key)) {
            throw ConfigError(std::string("sweep.") + key + " is required");
        }
    }
    run.variable = parse_sweep_variable(string(sw, "variable", "sweep", ""));
    run.range.start = number(sw, "start_m", "sweep", 0.0);
    run.range.stop = number(sw, "stop_m", "sweep", 0.0);
    run.range.steps = integer(sw, "steps", "sweep", 200);

    if (root.contains("link")) {
        read_link(root.at("link"), run.system.link);
    }
    if (root.contains("uca")) {
        read_uca(root.at("uca"), run.system.uca);
    }
    if (root.contains("gains")) {
        read_gains(root.at("gains"), run.system);
    }
    if (root.contains("lens")) {
        read_lens(root.at("lens"), run.system);
    }
    if (root.contains("bifocal")) {
        read_bifocal(root.at("bifocal"), run.system);
    }
    run.system.validate();
    return run;
}

CapacityRun load_capacity_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_capacity_config(buf.str());
}

} // namespace oam
