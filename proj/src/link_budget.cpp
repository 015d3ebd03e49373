// SPDX-License-Identifier: Apache-2.0

#include "oam/link_budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <tuple>

#include "json.hpp"

#include "oam/errors.hpp"
#include "text_util.hpp"

namespace oam {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

double snr_from_gain(const LinkConfig& cfg, double gain) {
    return received_power(cfg.tx_power, gain, effective_aperture(cfg.wavelength, cfg.rx_gain), cfg.distance) /
           cfg.noise;
}

// True when a ray leaving the focus at theta never reaches the lens face.
bool outside_lens(const LensSpec& lens, double focal, double theta) {
    if (!(theta < max_feed_angle(lens.n))) {
        return true;
    }
    return 0.5 * lens.diameter - focal * std::tan(theta) < -1e-15 * lens.diameter;
}

std::vector<double> collect_snr(std::span<const SnrCaseResult> results) {
    std::vector<double> out;
    out.reserve(results.size());
    for (const auto& r : results) {
        out.push_back(r.snr);
    }
    return out;
}

} // namespace

void LinkConfig::validate() const {
    require_positive(tx_power, "tx_power");
    require_positive(bandwidth, "bandwidth");
    require_positive(noise, "noise");
    require_positive(rx_gain, "rx_gain");
    require_positive(rx_radius, "rx_radius");
    require_positive(distance, "distance");
    require_positive(wavelength, "wavelength");
    if (modes.empty()) {
        throw DomainError("modes must not be empty");
    }
    if (!(residual_divergence >= 0.0 && residual_divergence < kPi / 2.0)) {
        throw DomainError("residual_divergence must lie in [0, pi/2)");
    }
}

const char* to_string(ReceptionCase c) {
    switch (c) {
    case ReceptionCase::FullMainLobe:
        return "full_main_lobe";
    case ReceptionCase::Partial:
        return "partial";
    case ReceptionCase::NoReception:
        return "no_reception";
    }
    return "unknown";
}

double effective_aperture(double lambda, double rx_gain) {
    require_positive(lambda, "wavelength");
    if (!(rx_gain >= 0.0)) {
        throw DomainError("receive gain must be non-negative");
    }
    return lambda * lambda * rx_gain / (4.0 * kPi);
}

double received_power(double tx_power, double tx_gain, double aperture, double distance) {
    require_positive(distance, "distance");
    return tx_gain * aperture * tx_power / (4.0 * kPi * distance * distance);
}

DivergentBeam divergent_beam(const UcaGeometry& geom, OamMode mode, double peak_gain) {
    auto pattern = std::make_shared<BeamPattern>(geom, mode);
    const Beamwidth bw = pattern->half_power();
    DivergentBeam beam;
    beam.l = mode.l;
    beam.theta = pattern->peak_angle();
    beam.half_width = bw.half_width;
    beam.peak_gain = peak_gain > 0.0 ? peak_gain : pattern->directivity();
    beam.pattern = [pattern](double theta) { return pattern->gain(theta); };
    return beam;
}

std::pair<double, double> reception_bounds(const DivergentBeam& beam, double rx_radius) {
    require_positive(rx_radius, "rx_radius");
    if (!(beam.half_width > 0.0)) {
        throw GeometryError("divergent beam needs a positive half-power width");
    }
    if (beam.l == 0) {
        return {rx_radius / std::tan(beam.half_width), kInf};
    }
    if (!(beam.theta > beam.half_width)) {
        throw GeometryError("divergence angle must exceed the half-power width for mode " + std::to_string(beam.l));
    }
    const double outer = beam.theta + beam.half_width;
    const double d1 = outer >= kPi / 2.0 ? 0.0 : rx_radius / std::tan(outer);
    const double d2 = rx_radius / std::tan(beam.theta - beam.half_width);
    return {d1, d2};
}

SnrCaseResult snr_divergent(const LinkConfig& cfg, const DivergentBeam& beam) {
    cfg.validate();
    SnrCaseResult r;
    std::tie(r.d1, r.d2) = reception_bounds(beam, cfg.rx_radius);
    const double d = cfg.distance;
    if (d < r.d1) {
        r.reception = ReceptionCase::FullMainLobe;
        r.snr = snr_from_gain(cfg, beam.peak_gain);
    } else if (d <= r.d2) {
        r.reception = ReceptionCase::Partial;
        const double theta_rx = std::atan(cfg.rx_radius / d);
        const double fraction = (beam.l == 0 || theta_rx >= beam.theta) ? 1.0 : beam.pattern(theta_rx);
        r.snr = snr_from_gain(cfg, beam.peak_gain * fraction);
    } else {
        r.reception = ReceptionCase::NoReception;
        r.snr = 0.0;
    }
    return r;
}

double shannon_capacity(double bandwidth, std::span<const double> snr) {
    double c = 0.0;
    for (double s : snr) {
        if (!(s >= 0.0)) {
            throw DomainError("SNR must be non-negative");
        }
        c += std::log2(1.0 + s);
    }
    return bandwidth * c;
}

double capacity_divergent(const LinkConfig& cfg, std::span<const DivergentBeam> beams) {
    std::vector<SnrCaseResult> results;
    for (const auto& b : beams) {
        results.push_back(snr_divergent(cfg, b));
    }
    const auto snr = collect_snr(results);
    return shannon_capacity(cfg.bandwidth, snr);
}

double max_reception_distance(double rx_radius, double sigma) {
    require_positive(rx_radius, "rx_radius");
    sigma = std::fabs(sigma);
    if (sigma == 0.0) {
        return kInf;
    }
    if (!(sigma < kPi / 2.0)) {
        throw DomainError("residual divergence must be below pi/2");
    }
    return rx_radius / std::tan(sigma);
}

SnrCaseResult snr_converged(const LinkConfig& cfg, const LensSpec& lens, double theta_l, double converged_gain) {
    cfg.validate();
    lens.validate();
    SnrCaseResult r;
    r.d1 = r.d2 = max_reception_distance(cfg.rx_radius, cfg.residual_divergence);
    if (cfg.distance > r.d1) {
        return r;
    }
    if (outside_lens(lens, lens.focal, theta_l)) {
        r.off_aperture = true;
        return r;
    }
    const double a_prime = aperture_amplitude(converged_gain, lens.n, lens.focal, theta_l, lens.energy_ratio);
    const double t = thickness(lens.n, lens.focal, lens.diameter, theta_l);
    const auto amp = attenuated_amplitude(a_prime, lens.attenuation_per_m, t, lens.attenuation_mode);
    r.reception = ReceptionCase::FullMainLobe;
    r.fully_absorbed = amp.fully_absorbed;
    r.snr = snr_from_gain(cfg, amp.value);
    return r;
}

double capacity_converged(const LinkConfig& cfg, const LensSpec& lens, std::span<const double> thetas,
                          double converged_gain) {
    std::vector<double> snr;
    for (double t : thetas) {
        snr.push_back(snr_converged(cfg, lens, t, converged_gain).snr);
    }
    return shannon_capacity(cfg.bandwidth, snr);
}

SnrCaseResult snr_bifocal(const LinkConfig& cfg, const BifocalSpec& bifocal, const LensSpec& lens, double theta_l,
                          double converged_gain) {
    cfg.validate();
    bifocal.validate();
    lens.validate();
    SnrCaseResult r;
    const bool internal = theta_l < bifocal.nu;
    r.branch = internal ? LensBranch::Internal : LensBranch::External;
    double sigma = cfg.residual_divergence;
    if (internal && theta_l > 0.0) {
        sigma = residual_divergence(theta_l, internal_feed_angle(bifocal.f_e, bifocal.f_i, theta_l), bifocal.n);
    } else if (internal) {
        sigma = 0.0;
    }
    r.d1 = r.d2 = max_reception_distance(cfg.rx_radius, sigma);
    if (cfg.distance > r.d1) {
        return r;
    }
    if (outside_lens(lens, bifocal.f_e, theta_l)) {
        r.off_aperture = true;
        return r;
    }
    const auto amp = bifocal_amplitude(converged_gain, theta_l, bifocal, lens);
    r.reception = ReceptionCase::FullMainLobe;
    r.fully_absorbed = amp.amplitude.fully_absorbed;
    r.snr = snr_from_gain(cfg, amp.amplitude.value);
    return r;
}

double capacity_bifocal(const LinkConfig& cfg, const BifocalSpec& bifocal, const LensSpec& lens,
                        std::span<const double> thetas, double converged_gain) {
    std::vector<double> snr;
    for (double t : thetas) {
        snr.push_back(snr_bifocal(cfg, bifocal, lens, t, converged_gain).snr);
    }
    return shannon_capacity(cfg.bandwidth, snr);
}

const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::Divergent:
        return "divergent";
    case Scenario::Converged:
        return "converged";
    case Scenario::Bifocal:
        return "bifocal";
    }
    return "unknown";
}

const char* to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::Distance:
        return "distance";
    case SweepVariable::Focal:
        return "focal";
    case SweepVariable::UcaRadius:
        return "uca_radius";
    }
    return "unknown";
}

void SystemConfig::validate() const {
    uca.validate();
    LinkConfig l = link;
    l.wavelength = uca.wavelength();
    l.validate();
    for (int m : link.modes) {
        validate_mode(uca, OamMode{m});
    }
    if (!divergent_peak_gain_dbi.empty() && divergent_peak_gain_dbi.size() != link.modes.size()) {
        throw ConfigError("divergent_peak_gain_dbi needs one entry per mode");
    }
    if (!std::isfinite(converged_gain_dbi)) {
        throw ConfigError("converged_gain_dbi must be finite");
    }
    refraction_index(eps_r, mu_r);
    require_positive(focal, "focal");
    require_positive(balance, "balance");
    if (!(attenuation_per_mm >= 0.0)) {
        throw DomainError("attenuation_per_mm must be non-negative");
    }
    if (!(energy_ratio > 0.0 && energy_ratio <= 1.0)) {
        throw DomainError("energy_ratio must lie in (0, 1]");
    }
    if (rho && !(*rho > 1.0)) {
        throw DomainError("rho must exceed 1");
    }
    if (m_int && *m_int < 1) {
        throw DomainError("m_int must be >= 1");
    }
    if (rho_target && !(*rho_target > 1.0)) {
        throw DomainError("rho_target must exceed 1");
    }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double mode_divergence(const SystemConfig& cfg, int l) {
    if (l == 0) {
        return 0.0;
    }
    if (cfg.theta_source == ThetaSource::Pattern) {
        return peak_divergence_angle(cfg.uca, OamMode{l});
    }
    if (l < 1 || l > 4) {
        throw ConfigError("empirical divergence laws cover modes 1..4 only, got " + std::to_string(l));
    }
    const auto form = cfg.theta_source == ThetaSource::PowerLaw ? DivergenceForm::PowerLaw : DivergenceForm::Rational;
    const auto model = reference_divergence_model(form, l);
    return deg_to_rad(divergence_from_model(model, cfg.uca.radius * 1e3).theta_deg);
}

namespace {

LensSpec lens_for(const SystemConfig& cfg, double focal, std::span<const double> thetas) {
    LensSpec lens;
    lens.n = refraction_index(cfg.eps_r, cfg.mu_r);
    lens.focal = focal;
    if (cfg.sizing == LensSizing::FixedBalance) {
        lens.diameter = cfg.balance * focal;
    } else {
        const double theta_max = *std::max_element(thetas.begin(), thetas.end());
        lens.diameter = diameter_for(lens.n, focal, theta_max);
    }
    lens.attenuation_per_m = attenuation_from_per_mm(cfg.attenuation_per_mm);
    lens.energy_ratio = cfg.energy_ratio;
    lens.attenuation_mode = cfg.attenuation_mode;
    return lens;
}

std::vector<double> mode_thetas(const SystemConfig& cfg) {
    std::vector<double> out;
    for (int l : cfg.link.modes) {
        out.push_back(mode_divergence(cfg, l));
    }
    return out;
}

LinkConfig effective_link(const SystemConfig& cfg) {
    LinkConfig l = cfg.link;
    l.wavelength = cfg.uca.wavelength();
    return l;
}

std::vector<DivergentBeam> divergent_beams(const SystemConfig& cfg) {
    std::vector<DivergentBeam> beams;
    for (std::size_t i = 0; i < cfg.link.modes.size(); ++i) {
        const double g = cfg.divergent_peak_gain_dbi.empty() ? 0.0 : db_to_linear(cfg.divergent_peak_gain_dbi[i]);
        beams.push_back(divergent_beam(cfg.uca, OamMode{cfg.link.modes[i]}, g));
    }
    return beams;
}

CurvePoint evaluate_with(const SystemConfig& cfg, Scenario scenario, const std::vector<DivergentBeam>* cached) {
    cfg.validate();
    const LinkConfig link = effective_link(cfg);
    std::vector<SnrCaseResult> results;
    switch (scenario) {
    case Scenario::Divergent: {
        std::vector<DivergentBeam> own;
        if (cached == nullptr) {
            own = divergent_beams(cfg);
            cached = &own;
        }
        for (const auto& b : *cached) {
            results.push_back(snr_divergent(link, b));
        }
        break;
    }
    case Scenario::Converged: {
        const auto design = design_single_lens(cfg);
        const double g = db_to_linear(cfg.converged_gain_dbi);
        for (double t : design.thetas) {
            results.push_back(snr_converged(link, design.lens, t, g));
        }
        break;
    }
    case Scenario::Bifocal: {
        const auto design = design_bifocal_lens(cfg);
        const double g = db_to_linear(cfg.converged_gain_dbi);
        for (double t : design.thetas) {
            results.push_back(snr_bifocal(link, design.spec, design.lens, t, g));
        }
        break;
    }
    }
    CurvePoint p;
    p.per_mode_snr = collect_snr(results);
    p.capacity_bps = shannon_capacity(link.bandwidth, p.per_mode_snr);
    return p;
}

} // namespace

LensDesignPoint design_single_lens(const SystemConfig& cfg) {
    LensDesignPoint d;
    d.thetas = mode_thetas(cfg);
    d.lens = lens_for(cfg, cfg.focal, d.thetas);
    d.lens.validate();
    return d;
}

BifocalDesignPoint design_bifocal_lens(const SystemConfig& cfg) {
    BifocalDesignPoint d;
    d.thetas = mode_thetas(cfg);
    const double theta_1 = mode_divergence(cfg, 1);
    const double theta_2 = mode_divergence(cfg, 2);
    const double lambda = cfg.uca.wavelength();
    BifocalSpec& s = d.spec;
    s.f_e = cfg.focal;
    s.lambda = lambda;
    s.n = refraction_index(cfg.eps_r, cfg.mu_r);
    s.nu = boundary_angle(theta_1, theta_2);
    if (cfg.rho) {
        s.f_i = *cfg.rho * s.f_e;
        s.m_int = 1;
        d.m_int_selected = false;
    } else {
        if (cfg.m_int) {
            s.m_int = *cfg.m_int;
        } else if (cfg.rho_target) {
            s.m_int = best_matching_m_int(s.f_e, theta_1, lambda, *cfg.rho_target);
        } else {
            s.m_int = smallest_valid_m_int(s.f_e, theta_1, lambda);
        }
        s.f_i = internal_focal(s.f_e, theta_1, lambda, s.m_int);
        d.m_int_selected = true;
    }
    s.validate();
    d.lens = lens_for(cfg, s.f_e, d.thetas);
    d.lens.validate();
    return d;
}

CurvePoint evaluate(const SystemConfig& cfg, Scenario scenario) { return evaluate_with(cfg, scenario, nullptr); }

CapacityCurve sweep(const SystemConfig& cfg, Scenario scenario, SweepVariable variable, SweepRange range) {
    if (range.steps < 2) {
        throw ConfigError("sweep needs at least 2 steps");
    }
    if (!(range.start > 0.0 && range.stop > range.start) || !std::isfinite(range.stop)) {
        throw ConfigError("sweep range must satisfy 0 < start < stop");
    }
    if (scenario == Scenario::Divergent && variable == SweepVariable::Focal) {
        throw ConfigError("focal sweep is undefined for the divergent scenario");
    }
    cfg.validate();
    std::vector<DivergentBeam> beams;
    const bool cache = scenario == Scenario::Divergent && variable != SweepVariable::UcaRadius;
    if (cache) {
        beams = divergent_beams(cfg);
    }
    CapacityCurve curve;
    curve.scenario = scenario;
    curve.variable = variable;
    curve.points.reserve(static_cast<std::size_t>(range.steps));
    for (int i = 0; i < range.steps; ++i) {
        const double x = range.start + (range.stop - range.start) * i / (range.steps - 1);
        SystemConfig point = cfg;
        switch (variable) {
        case SweepVariable::Distance:
            point.link.distance = x;
            break;
        case SweepVariable::Focal:
            point.focal = x;
            break;
        case SweepVariable::UcaRadius:
            point.uca.radius = x;
            break;
        }
        CurvePoint p = evaluate_with(point, scenario, cache ? &beams : nullptr);
        p.x = x;
        curve.points.push_back(std::move(p));
    }
    return curve;
}

void write_curve_csv(std::ostream& out, const CapacityCurve& curve) {
    out << "x,capacity_bps\n";
    for (const auto& p : curve.points) {
        out << text::format_double(p.x) << ',' << text::format_double(p.capacity_bps) << '\n';
    }
}

std::string curve_to_json(const CapacityCurve& curve) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : curve.points) {
        nlohmann::ordered_json o;
        o["x"] = p.x;
        o["capacity_bps"] = p.capacity_bps;
        o["per_mode_snr"] = p.per_mode_snr;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

} // namespace oam
