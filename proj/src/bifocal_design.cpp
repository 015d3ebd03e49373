// SPDX-License-Identifier: Apache-2.0

#include "oam/bifocal_design.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "oam/errors.hpp"
#include "text_util.hpp"

namespace oam {
namespace {

constexpr int kMaxWavelengthMultiple = 100000;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive");
    }
}

void require_acute(double theta, const char* what) {
    if (!(theta > 0.0 && theta < kPi / 2.0)) {
        throw DomainError(std::string(what) + " must lie in (0, pi/2)");
    }
}

} // namespace

void BifocalSpec::validate() const {
    require_positive(f_e, "external focal distance");
    require_positive(f_i, "internal focal distance");
    require_positive(lambda, "wavelength");
    if (!(f_i > f_e)) {
        throw DomainError("bifocal lens needs f_i > f_e (rho > 1)");
    }
    if (m_int < 1) {
        throw DomainError("wavelength multiple m_int must be >= 1");
    }
    if (!(nu > 0.0 && nu < max_feed_angle(n))) {
        throw DomainError("boundary angle must lie in (0, arccos(1/n))");
    }
}

double boundary_angle(double theta_lo, double theta_hi) {
    if (!(theta_lo > 0.0 && theta_lo < theta_hi && theta_hi < kPi / 2.0)) {
        throw DomainError("boundary_angle: requires 0 < theta_lo < theta_hi < pi/2");
    }
    return 0.5 * (theta_lo + theta_hi);
}

double internal_focal(double f_e, double theta_1, double lambda, int m_int) {
    require_positive(f_e, "external focal distance");
    require_positive(lambda, "wavelength");
    require_acute(theta_1, "mode-1 divergence angle");
    if (m_int < 1) {
        throw DomainError("wavelength multiple m_int must be >= 1");
    }
    return std::sqrt((m_int * lambda + f_e / std::cos(theta_1)) * f_e * std::tan(theta_1));
}

FocalRatio focal_ratio(double f_e, double theta_1, double lambda, int m_int) {
    FocalRatio r;
    r.rho = internal_focal(f_e, theta_1, lambda, m_int) / f_e;
    r.valid = r.rho > 1.0;
    return r;
}

int smallest_valid_m_int(double f_e, double theta_1, double lambda) {
    for (int m = 1; m <= kMaxWavelengthMultiple; ++m) {
        if (focal_ratio(f_e, theta_1, lambda, m).valid) {
            return m;
        }
    }
    throw GeometryError("no wavelength multiple gives rho > 1");
}

int best_matching_m_int(double f_e, double theta_1, double lambda, double rho_target) {
    require_positive(rho_target, "target focal ratio");
    int best = 1;
    double best_err = std::fabs(focal_ratio(f_e, theta_1, lambda, 1).rho - rho_target);
    // rho grows monotonically in m, so stop once it has passed the target.
    for (int m = 2; m <= kMaxWavelengthMultiple; ++m) {
        const double rho = focal_ratio(f_e, theta_1, lambda, m).rho;
        const double err = std::fabs(rho - rho_target);
        if (err < best_err) {
            best_err = err;
            best = m;
        }
        if (rho > rho_target) {
            break;
        }
    }
    return best;
}

double path_matched_internal_focal(double f_e, double theta_1, double lambda, int m_int) {
    require_positive(f_e, "external focal distance");
    require_positive(lambda, "wavelength");
    require_acute(theta_1, "mode-1 divergence angle");
    if (m_int < 1) {
        throw DomainError("wavelength multiple m_int must be >= 1");
    }
    const double k = m_int * lambda + f_e / std::cos(theta_1);
    const double lateral = f_e * std::tan(theta_1);
    return std::sqrt((k - lateral) * (k + lateral));
}

double internal_feed_angle(double f_e, double f_i, double theta) {
    require_positive(f_e, "external focal distance");
    require_positive(f_i, "internal focal distance");
    return std::atan(f_e * std::tan(theta) / f_i);
}

ProfilePoint bifocal_boundary_point(double f_e, double nu, double n) {
    require_positive(f_e, "external focal distance");
    if (!(nu > 0.0)) {
        throw DomainError("boundary angle must be positive");
    }
    if (!(nu < max_feed_angle(n))) {
        throw GeometryError("boundary angle beyond arccos(1/n): ray never meets the external surface");
    }
    // Substituting y = (x + f_e) tan(nu) into the external surface gives
    // A x^2 + 2 B x - C = 0 with A > 0 and C > 0: one positive root.
    const double t = std::tan(nu);
    const double t2 = t * t;
    const double a = n * n - 1.0 - t2;
    const double b = f_e * (n - 1.0 - t2);
    const double c = f_e * f_e * t2;
    double x;
    if (b >= 0.0) {
        x = c / (b + std::sqrt(b * b + a * c));
    } else {
        x = (-b + std::sqrt(b * b + a * c)) / a;
    }
    return {x, (x + f_e) * t};
}

BifocalGeometry solve_bifocal(double f_e, double rho, double nu, double n, double diameter, int samples) {
    require_positive(f_e, "external focal distance");
    require_positive(diameter, "lens diameter");
    if (!(rho > 1.0)) {
        throw DomainError("solve_bifocal: rho must exceed 1");
    }
    if (samples < 2) {
        throw DomainError("solve_bifocal: needs at least 2 samples per region");
    }
    const double f_i = rho * f_e;
    BifocalGeometry g;
    g.boundary = bifocal_boundary_point(f_e, nu, n);
    g.offset_c = g.boundary.x - profile_cartesian(n, f_i, g.boundary.y);
    if (!std::isfinite(g.offset_c)) {
        throw GeometryError("solve_bifocal: no real internal-surface offset for f_e=" + text::format_double(f_e) +
                            " rho=" + text::format_double(rho) + " nu=" + text::format_double(nu));
    }
    const double rim = 0.5 * diameter;
    g.boundary_inside_aperture = g.boundary.y < rim;

    const double internal_end = std::min(g.boundary.y, rim);
    g.internal_profile.samples.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double y = internal_end * i / (samples - 1);
        g.internal_profile.samples.push_back({g.offset_c + profile_cartesian(n, f_i, y), y});
    }
    if (g.boundary_inside_aperture) {
        g.external_profile.samples.reserve(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i) {
            const double y = g.boundary.y + (rim - g.boundary.y) * i / (samples - 1);
            g.external_profile.samples.push_back({profile_cartesian(n, f_e, y), y});
        }
        g.aperture_x = g.external_profile.samples.back().x;
    } else {
        g.aperture_x = g.internal_profile.samples.back().x;
    }
    g.internal_profile.t_max = g.aperture_x - g.offset_c;
    g.external_profile.t_max = g.boundary_inside_aperture ? g.aperture_x - g.boundary.x : 0.0;
    g.internal_center_thickness = g.aperture_x - g.offset_c;
    g.single_focal_center_thickness = profile_cartesian(n, f_e, rim);
    return g;
}

double residual_divergence(double theta_l, double theta_l_fi, double n) {
    require_acute(theta_l, "divergence angle");
    require_acute(theta_l_fi, "internal-focus divergence angle");
    if (!(n > 1.0)) {
        throw DomainError("refraction index must exceed 1");
    }
    const double theta_t = std::atan(std::sin(theta_l_fi) / (n - std::cos(theta_l_fi)));
    const double arg = std::sin(theta_l + theta_t) / n;
    if (!(arg >= -1.0 && arg <= 1.0)) {
        throw DomainError("residual_divergence: arcsin argument outside [-1, 1]");
    }
    return std::asin(arg) - theta_t;
}

double wave_path_external_focus(double f_e, double theta_l, double t_max, double tau, double n) {
    return f_e / std::cos(theta_l) + n * t_max / std::cos(tau);
}

double wave_path_internal_focus(double f_i, double theta_l_fi, double t_max, double n) {
    return f_i / std::cos(theta_l_fi) + n * t_max;
}

PathMatch wave_path_match(const BifocalSpec& spec, double theta_l, double t_max) {
    PathMatch m;
    m.theta_fi = internal_feed_angle(spec.f_e, spec.f_i, theta_l);
    m.tau = residual_divergence(theta_l, m.theta_fi, spec.n);
    const double l_e = wave_path_external_focus(spec.f_e, theta_l, t_max, m.tau, spec.n);
    const double l_i = wave_path_internal_focus(spec.f_i, m.theta_fi, t_max, spec.n);
    m.difference = l_i - l_e;
    m.target = spec.m_int * spec.lambda;
    m.mismatch = std::fabs(m.difference - m.target);
    m.bound = spec.n * t_max * (1.0 / std::cos(m.tau) - 1.0);
    return m;
}

BifocalAmplitude bifocal_amplitude(double a_in, double theta, const BifocalSpec& spec, const LensSpec& lens) {
    if (!(theta >= 0.0 && theta < max_feed_angle(spec.n))) {
        throw DomainError("bifocal_amplitude: angle must lie in [0, arccos(1/n))");
    }
    BifocalAmplitude out;
    double focal;
    if (theta < spec.nu) {
        out.branch = LensBranch::Internal;
        focal = spec.f_i;
        out.feed_angle = internal_feed_angle(spec.f_e, spec.f_i, theta);
    } else {
        out.branch = LensBranch::External;
        focal = spec.f_e;
        out.feed_angle = theta;
    }
    const double a_prime = aperture_amplitude(a_in, spec.n, focal, out.feed_angle, lens.energy_ratio);
    out.thickness = thickness(spec.n, focal, lens.diameter, out.feed_angle);
    out.amplitude = attenuated_amplitude(a_prime, lens.attenuation_per_m, out.thickness, lens.attenuation_mode);
    return out;
}

void write_bifocal_csv(std::ostream& out, const BifocalGeometry& geometry) {
    out << "region,y_mm,x_mm\n";
    for (const auto& s : geometry.internal_profile.samples) {
        out << "internal," << text::format_double(s.y * 1e3) << ',' << text::format_double(s.x * 1e3) << '\n';
    }
    for (const auto& s : geometry.external_profile.samples) {
        out << "external," << text::format_double(s.y * 1e3) << ',' << text::format_double(s.x * 1e3) << '\n';
    }
}

} // namespace oam
