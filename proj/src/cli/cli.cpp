// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "oam/beam_model.hpp"
#include "oam/bifocal_design.hpp"
#include "oam/config.hpp"
#include "oam/errors.hpp"
#include "oam/lens_design.hpp"
#include "oam/link_budget.hpp"
#include "oam/uca_design.hpp"
#include "oam/version.hpp"
#include "text_util.hpp"

namespace oam::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

enum class Kind { Number, Integer, Text, Flag, IntList };

struct Param {
    const char* name; // flag name without leading dashes; JSON key uses '_'
    Kind kind;
    const char* help;
};

// Values gathered either from flags or from a flat JSON config file.
struct Values {
    std::map<std::string, double> numbers;
    std::map<std::string, int> integers;
    std::map<std::string, std::string> texts;
    std::set<std::string> flags;
    std::map<std::string, std::vector<int>> lists;
    std::set<std::string> from_flags;

    std::optional<double> number(const std::string& k) const {
        auto it = numbers.find(k);
        return it == numbers.end() ? std::nullopt : std::optional<double>(it->second);
    }
    std::optional<int> integer(const std::string& k) const {
        auto it = integers.find(k);
        return it == integers.end() ? std::nullopt : std::optional<int>(it->second);
    }
    std::optional<std::string> text(const std::string& k) const {
        auto it = texts.find(k);
        return it == texts.end() ? std::nullopt : std::optional<std::string>(it->second);
    }
    bool flag(const std::string& k) const { return flags.count(k) > 0; }

    double require_number(const std::string& k) const {
        auto v = number(k);
        if (!v) {
            throw ConfigError("missing required option --" + k);
        }
        return *v;
    }
};

std::string json_key(std::string name) {
    for (auto& c : name) {
        if (c == '-') {
            c = '_';
        }
    }
    return name;
}

struct Command {
    CLI::App* app = nullptr;
    std::vector<Param> params;
    Values values;
    std::string config_path;
    std::string format;
    std::string out_path;
};

void bind(Command& cmd, std::string default_format) {
    cmd.format = std::move(default_format);
    for (const auto& p : cmd.params) {
        const std::string name = p.name;
        const std::string flag = "--" + name;
        Values& v = cmd.values;
        switch (p.kind) {
        case Kind::Number:
            cmd.app->add_option_function<double>(
                flag, [&v, name](const double& x) { v.numbers[name] = x; v.from_flags.insert(name); }, p.help);
            break;
        case Kind::Integer:
            cmd.app->add_option_function<int>(
                flag, [&v, name](const int& x) { v.integers[name] = x; v.from_flags.insert(name); }, p.help);
            break;
        case Kind::Text:
            cmd.app->add_option_function<std::string>(
                flag, [&v, name](const std::string& x) { v.texts[name] = x; v.from_flags.insert(name); }, p.help);
            break;
        case Kind::Flag:
            cmd.app->add_flag_callback(flag, [&v, name]() { v.flags.insert(name); v.from_flags.insert(name); },
                                       p.help);
            break;
        case Kind::IntList:
            cmd.app
                ->add_option_function<std::vector<int>>(
                    flag, [&v, name](const std::vector<int>& x) { v.lists[name] = x; v.from_flags.insert(name); },
                    p.help)
                ->delimiter(',');
            break;
        }
    }
    cmd.app->add_option("--config", cmd.config_path, "JSON configuration file (exclusive with parameter flags)");
    cmd.app->add_option("--format", cmd.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd.app->add_option("--out", cmd.out_path, "Output file (default: standard output)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void load_flat_config(Command& cmd) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(read_file(cmd.config_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    for (const auto& item : root.items()) {
        const Param* match = nullptr;
        for (const auto& p : cmd.params) {
            if (json_key(p.name) == item.key()) {
                match = &p;
            }
        }
        if (match == nullptr) {
            throw ConfigError("config: unknown key '" + item.key() + "'");
        }
        const auto& val = item.value();
        const std::string name = match->name;
        const std::string where = "config." + item.key();
        switch (match->kind) {
        case Kind::Number:
            if (!val.is_number()) {
                throw ConfigError(where + ": expected a number");
            }
            cmd.values.numbers[name] = val.get<double>();
            break;
        case Kind::Integer:
            if (!val.is_number_integer()) {
                throw ConfigError(where + ": expected an integer");
            }
            cmd.values.integers[name] = val.get<int>();
            break;
        case Kind::Text:
            if (!val.is_string()) {
                throw ConfigError(where + ": expected a string");
            }
            cmd.values.texts[name] = val.get<std::string>();
            break;
        case Kind::Flag:
            if (!val.is_boolean()) {
                throw ConfigError(where + ": expected true or false");
            }
            if (val.get<bool>()) {
                cmd.values.flags.insert(name);
            }
            break;
        case Kind::IntList:
            if (!val.is_array()) {
                throw ConfigError(where + ": expected an array of integers");
            }
            for (const auto& e : val) {
                if (!e.is_number_integer()) {
                    throw ConfigError(where + ": expected an array of integers");
                }
                cmd.values.lists[name].push_back(e.get<int>());
            }
            break;
        }
    }
}

void check_config_exclusive(const Command& cmd) {
    if (!cmd.config_path.empty() && !cmd.values.from_flags.empty()) {
        throw ConfigError("--config cannot be combined with parameter flags (got --" +
                          *cmd.values.from_flags.begin() + ")");
    }
}

void emit(const Command& cmd, const std::string& content, std::ostream& out) {
    if (cmd.out_path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(cmd.out_path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ConfigError("cannot write output file: " + cmd.out_path);
    }
    f << content;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ConfigError("cannot write output file: " + path);
    }
    f << content;
}

std::string fmt(double v) { return text::format_double(v); }

// ---------------------------------------------------------------- uca-design

std::string cmd_uca_design(const Command& cmd) {
    const Values& v = cmd.values;
    PatchInputs in;
    in.frequency = v.require_number("freq-ghz") * 1e9;
    in.eps_r = v.require_number("eps-r");
    if (v.flag("solve-h")) {
        if (v.number("h-mm")) {
            throw ConfigError("--h-mm and --solve-h are mutually exclusive");
        }
        in.h = solve_substrate_height(in.frequency, in.eps_r, v.require_number("target-eps-re"));
    } else {
        if (v.number("target-eps-re")) {
            throw ConfigError("--target-eps-re requires --solve-h");
        }
        in.h = v.require_number("h-mm") * 1e-3;
    }
    const PatchDesign d = design_patch(in);
    if (cmd.format == "csv") {
        return "W_P_mm,L_P_mm,dL_mm,eps_re,freq_ghz,eps_r,h_mm\n" + fmt(d.w_p * 1e3) + ',' + fmt(d.l_p * 1e3) + ',' +
               fmt(d.delta_l * 1e3) + ',' + fmt(d.eps_re) + ',' + fmt(in.frequency * 1e-9) + ',' + fmt(in.eps_r) +
               ',' + fmt(in.h * 1e3) + '\n';
    }
    return patch_report_json(d);
}

// ------------------------------------------------------------ fit-divergence

std::string cmd_fit_divergence(const Command& cmd) {
    const auto table_path = cmd.values.text("table");
    const DivergenceTable table = table_path ? load_divergence_csv(*table_path) : builtin_divergence_table();
    if (cmd.format == "csv") {
        std::string s = "mode,a,b,power_rms_deg,p,q,rational_rms_deg\n";
        for (int l = 1; l <= 4; ++l) {
            const auto pw = fit_divergence(table, DivergenceForm::PowerLaw, l);
            const auto ra = fit_divergence(table, DivergenceForm::Rational, l);
            s += std::to_string(l) + ',' + fmt(pw.model.c0) + ',' + fmt(pw.model.c1) + ',' +
                 fmt(pw.fit.residual_rms) + ',' + fmt(ra.model.c0) + ',' + fmt(ra.model.c1) + ',' +
                 fmt(ra.fit.residual_rms) + '\n';
        }
        return s;
    }
    ordered_json j;
    j["tool"] = kToolTag;
    j["source"] = table_path ? *table_path : std::string("builtin");
    j["fits"] = ordered_json::array();
    for (int l = 1; l <= 4; ++l) {
        const auto pw = fit_divergence(table, DivergenceForm::PowerLaw, l);
        const auto ra = fit_divergence(table, DivergenceForm::Rational, l);
        ordered_json m;
        m["mode"] = l;
        m["power_law"] = {{"a", pw.model.c0}, {"b", pw.model.c1}, {"rms_deg", pw.fit.residual_rms},
                          {"iterations", pw.fit.iterations}};
        m["rational"] = {{"p", ra.model.c0}, {"q", ra.model.c1}, {"rms_deg", ra.fit.residual_rms},
                         {"iterations", ra.fit.iterations}};
        j["fits"].push_back(std::move(m));
    }
    return j.dump(2) + "\n";
}

// --------------------------------------------------------------- lens-design

ThetaSource parse_theta_source(const std::string& s) {
    if (s == "power_law") {
        return ThetaSource::PowerLaw;
    }
    if (s == "rational") {
        return ThetaSource::Rational;
    }
    if (s == "pattern") {
        return ThetaSource::Pattern;
    }
    throw ConfigError("--theta-source: expected power_law, rational or pattern, got '" + s + "'");
}

LensSizing parse_sizing(const std::string& s) {
    if (s == "fixed_balance") {
        return LensSizing::FixedBalance;
    }
    if (s == "cover_modes") {
        return LensSizing::CoverModes;
    }
    throw ConfigError("--sizing: expected fixed_balance or cover_modes, got '" + s + "'");
}

std::string cmd_lens_design(const Command& cmd) {
    const Values& v = cmd.values;
    const double frequency = v.number("freq-ghz").value_or(35.0) * 1e9;
    const double eps_r = v.number("eps-r").value_or(2.2);
    const double mu_r = v.number("mu-r").value_or(1.0);
    const double focal = v.require_number("focal-mm") * 1e-3;
    const int samples = v.integer("samples").value_or(512);
    if (samples < 2) {
        throw ConfigError("--samples must be at least 2");
    }
    if (v.number("balance") && v.number("theta-max-deg")) {
        throw ConfigError("--balance and --theta-max-deg are mutually exclusive");
    }
    const double n = refraction_index(eps_r, mu_r);
    double balance = v.number("balance").value_or(1.67);
    if (auto t = v.number("theta-max-deg")) {
        balance = balance_coefficient(n, deg_to_rad(*t));
    }
    const double diameter = balance * focal;

    ordered_json j;
    j["tool"] = kToolTag;
    j["n"] = n;
    j["mu_max_deg"] = rad_to_deg(max_feed_angle(n));
    j["focal_mm"] = focal * 1e3;
    j["balance"] = balance;
    j["diameter_mm"] = diameter * 1e3;
    j["samples"] = samples;

    std::ostringstream profile_csv;
    if (!v.flag("bifocal")) {
        for (const char* k : {"rho", "m-int", "rho-target", "uca-radius-mm", "theta-source"}) {
            if (v.number(k) || v.integer(k) || v.text(k)) {
                throw ConfigError(std::string("--") + k + " requires --bifocal");
            }
        }
        const LensProfile p = sample_profile(n, focal, diameter, samples);
        j["t_max_mm"] = p.t_max * 1e3;
        write_profile_csv(profile_csv, p);
    } else {
        SystemConfig sys;
        sys.uca.frequency = frequency;
        sys.uca.radius = v.number("uca-radius-mm") ? *v.number("uca-radius-mm") * 1e-3 : 0.6 * sys.uca.wavelength();
        sys.eps_r = eps_r;
        sys.mu_r = mu_r;
        sys.focal = focal;
        sys.sizing = LensSizing::FixedBalance;
        sys.balance = balance;
        sys.theta_source = parse_theta_source(v.text("theta-source").value_or("power_law"));
        sys.link.modes = {1, 2};
        if (auto r = v.number("rho")) {
            sys.rho = *r;
        }
        if (auto m = v.integer("m-int")) {
            sys.m_int = *m;
        }
        if (auto t = v.number("rho-target")) {
            sys.rho_target = *t;
        }
        sys.validate();
        const BifocalDesignPoint d = design_bifocal_lens(sys);
        const BifocalGeometry g = solve_bifocal(d.spec.f_e, d.spec.rho(), d.spec.nu, n, diameter, samples);
        const double theta_1 = mode_divergence(sys, 1);
        const double theta_2 = mode_divergence(sys, 2);
        ordered_json b;
        b["uca_radius_mm"] = sys.uca.radius * 1e3;
        b["theta_1_deg"] = rad_to_deg(theta_1);
        b["theta_2_deg"] = rad_to_deg(theta_2);
        b["nu_deg"] = rad_to_deg(d.spec.nu);
        b["f_e_mm"] = d.spec.f_e * 1e3;
        b["f_i_mm"] = d.spec.f_i * 1e3;
        b["rho"] = d.spec.rho();
        if (d.m_int_selected) {
            b["m_int"] = d.spec.m_int;
            b["path_matched_f_i_mm"] =
                path_matched_internal_focal(d.spec.f_e, theta_1, d.spec.lambda, d.spec.m_int) * 1e3;
        } else {
            b["m_int"] = nullptr;
        }
        b["offset_c_mm"] = g.offset_c * 1e3;
        b["boundary_x_mm"] = g.boundary.x * 1e3;
        b["boundary_y_mm"] = g.boundary.y * 1e3;
        b["boundary_inside_aperture"] = g.boundary_inside_aperture;
        b["internal_center_thickness_mm"] = g.internal_center_thickness * 1e3;
        b["single_focal_center_thickness_mm"] = g.single_focal_center_thickness * 1e3;
        j["bifocal"] = std::move(b);
        write_bifocal_csv(profile_csv, g);
    }

    if (cmd.format == "csv") {
        return profile_csv.str();
    }
    if (auto path = v.text("profile-out")) {
        write_file(*path, profile_csv.str());
    }
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------------ capacity

CapacityRun capacity_from_flags(const Values& v) {
    CapacityRun run;
    const auto scenario = v.text("scenario");
    const auto variable = v.text("sweep");
    if (!scenario) {
        throw ConfigError("missing required option --scenario");
    }
    if (!variable) {
        throw ConfigError("missing required option --sweep");
    }
    run.scenario = parse_scenario(*scenario);
    run.variable = parse_sweep_variable(*variable);
    run.range.start = v.require_number("start-m");
    run.range.stop = v.require_number("stop-m");
    run.range.steps = v.integer("steps").value_or(200);
    SystemConfig& s = run.system;
    if (auto it = v.lists.find("modes"); it != v.lists.end()) {
        s.link.modes = it->second;
    }
    s.link.distance = v.number("distance-m").value_or(s.link.distance);
    s.link.rx_radius = v.number("rx-radius-m").value_or(s.link.rx_radius);
    s.focal = v.number("focal-m").value_or(s.focal);
    s.uca.radius = v.number("uca-radius-m").value_or(s.uca.radius);
    s.converged_gain_dbi = v.number("converged-gain-dbi").value_or(s.converged_gain_dbi);
    if (auto r = v.number("rho")) {
        s.rho = *r;
    }
    if (auto t = v.number("rho-target")) {
        s.rho_target = *t;
    }
    if (auto z = v.text("sizing")) {
        s.sizing = parse_sizing(*z);
    }
    if (auto t = v.text("theta-source")) {
        s.theta_source = parse_theta_source(*t);
    }
    s.validate();
    return run;
}

std::string cmd_capacity(const Command& cmd) {
    const CapacityRun run =
        cmd.config_path.empty() ? capacity_from_flags(cmd.values) : load_capacity_config(cmd.config_path);
    const CapacityCurve curve = sweep(run.system, run.scenario, run.variable, run.range);
    if (cmd.format == "json") {
        return curve_to_json(curve);
    }
    std::ostringstream s;
    write_curve_csv(s, curve);
    return s.str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Design and link-budget tool for lens-converged OAM radio links", "oamlens"};
    app.set_version_flag("--version", kToolTag);
    app.require_subcommand(1);

    Command uca;
    uca.app = app.add_subcommand("uca-design", "Size the rectangular patch elements of the array");
    uca.params = {{"freq-ghz", Kind::Number, "Resonant frequency (GHz)"},
                  {"eps-r", Kind::Number, "Substrate relative permittivity"},
                  {"h-mm", Kind::Number, "Substrate thickness (mm)"},
                  {"solve-h", Kind::Flag, "Solve the substrate thickness for --target-eps-re"},
                  {"target-eps-re", Kind::Number, "Target effective permittivity for --solve-h"}};
    bind(uca, "json");

    Command fit;
    fit.app = app.add_subcommand("fit-divergence", "Fit divergence-angle laws to radius/angle data");
    fit.params = {{"table", Kind::Text, "CSV with header R_mm,theta1_deg,...,theta4_deg (default: built-in)"}};
    bind(fit, "json");

    Command lens;
    lens.app = app.add_subcommand("lens-design", "Hyperbolic single-focal or bifocal lens profile");
    lens.params = {{"freq-ghz", Kind::Number, "Operating frequency (GHz), default 35"},
                   {"eps-r", Kind::Number, "Lens relative permittivity, default 2.2"},
                   {"mu-r", Kind::Number, "Lens relative permeability, default 1"},
                   {"focal-mm", Kind::Number, "Focal distance (external focal for --bifocal), mm"},
                   {"balance", Kind::Number, "Diameter over focal distance, default 1.67"},
                   {"theta-max-deg", Kind::Number, "Size the lens to cover this feed angle (deg)"},
                   {"samples", Kind::Integer, "Profile samples per region, default 512"},
                   {"bifocal", Kind::Flag, "Design a bifocal lens"},
                   {"rho", Kind::Number, "Bifocal focal ratio f_i/f_e"},
                   {"m-int", Kind::Integer, "Wavelength multiple defining f_i"},
                   {"rho-target", Kind::Number, "Choose the wavelength multiple closest to this ratio"},
                   {"uca-radius-mm", Kind::Number, "Array radius for the divergence angles, default 0.6 wavelength"},
                   {"theta-source", Kind::Text, "power_law, rational or pattern"},
                   {"profile-out", Kind::Text, "Also write the profile CSV here (json format only)"}};
    bind(lens, "json");

    Command cap;
    cap.app = app.add_subcommand("capacity", "Capacity sweep for divergent, converged or bifocal links");
    cap.params = {{"scenario", Kind::Text, "divergent, converged or bifocal"},
                  {"sweep", Kind::Text, "distance, focal or uca_radius"},
                  {"start-m", Kind::Number, "Sweep start (m)"},
                  {"stop-m", Kind::Number, "Sweep stop (m)"},
                  {"steps", Kind::Integer, "Grid points, default 200"},
                  {"modes", Kind::IntList, "Comma-separated OAM modes, default 1,2"},
                  {"distance-m", Kind::Number, "Link distance (m)"},
                  {"rx-radius-m", Kind::Number, "Receive aperture radius (m)"},
                  {"focal-m", Kind::Number, "Lens focal distance (m)"},
                  {"uca-radius-m", Kind::Number, "Array radius (m)"},
                  {"converged-gain-dbi", Kind::Number, "Gain of the converged beam (dBi)"},
                  {"rho", Kind::Number, "Bifocal focal ratio"},
                  {"rho-target", Kind::Number, "Bifocal focal ratio target"},
                  {"sizing", Kind::Text, "fixed_balance or cover_modes"},
                  {"theta-source", Kind::Text, "power_law, rational or pattern"}};
    bind(cap, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        Command* active = nullptr;
        std::string (*handler)(const Command&) = nullptr;
        if (uca.app->parsed()) {
            active = &uca;
            handler = cmd_uca_design;
        } else if (fit.app->parsed()) {
            active = &fit;
            handler = cmd_fit_divergence;
        } else if (lens.app->parsed()) {
            active = &lens;
            handler = cmd_lens_design;
        } else {
            active = &cap;
            handler = cmd_capacity;
        }
        check_config_exclusive(*active);
        if (!active->config_path.empty() && active != &cap) {
            load_flat_config(*active);
        }
        emit(*active, handler(*active), out);
        return 0;
    } catch (const oam::Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace oam::cli
