// SPDX-License-Identifier: Apache-2.0

#include "oam/lens_design.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "oam/errors.hpp"
#include "text_util.hpp"

namespace oam {
namespace {

void require_index(double n) {
    if (!(n > 1.0) || !std::isfinite(n)) {
        throw DomainError("refraction index must exceed 1");
    }
}

void require_focal(double f) {
    if (!(f > 0.0) || !std::isfinite(f)) {
        throw DomainError("focal distance must be positive");
    }
}

void require_inside_coverage(double n, double angle, const char* what) {
    if (!(angle >= 0.0)) {
        throw DomainError(std::string(what) + " must be non-negative");
    }
    if (!(angle < max_feed_angle(n))) {
        throw GeometryError(std::string(what) + " exceeds lens angular coverage arccos(1/n)");
    }
}

} // namespace

void LensSpec::validate() const {
    require_index(n);
    require_focal(focal);
    if (!(diameter > 0.0)) {
        throw DomainError("lens diameter must be positive");
    }
    if (!(attenuation_per_m >= 0.0)) {
        throw DomainError("attenuation factor must be non-negative");
    }
    if (!(energy_ratio > 0.0 && energy_ratio <= 1.0)) {
        throw DomainError("energy ratio must lie in (0, 1]");
    }
}

double refraction_index(double eps_r, double mu_r) {
    if (!(eps_r >= 1.0) || !(mu_r >= 1.0)) {
        throw DomainError("relative permittivity and permeability must be >= 1");
    }
    return std::sqrt(eps_r * mu_r);
}

double profile_polar(double n, double f, double mu) {
    require_index(n);
    require_focal(f);
    require_inside_coverage(n, mu, "feed angle");
    return (n - 1.0) * f / (n * std::cos(mu) - 1.0);
}

double profile_cartesian(double n, double f, double y) {
    require_index(n);
    require_focal(f);
    if (!(y >= 0.0)) {
        throw DomainError("profile_cartesian: radial coordinate must be non-negative");
    }
    const double b = (n - 1.0) * f;
    return y * y / (b + std::sqrt(b * b + (n * n - 1.0) * y * y));
}

double max_feed_angle(double n) {
    require_index(n);
    return std::acos(1.0 / n);
}

double balance_coefficient(double n, double theta_max) {
    require_index(n);
    require_inside_coverage(n, theta_max, "maximum divergence angle");
    return 2.0 * (n - 1.0) * std::sin(theta_max) / (n * std::cos(theta_max) - 1.0);
}

double diameter_for(double n, double f, double theta_max) {
    require_focal(f);
    return balance_coefficient(n, theta_max) * f;
}

double balance_coefficient_for_model(double n, const DivergenceModel& model, double radius_mm) {
    return balance_coefficient(n, deg_to_rad(divergence_from_model(model, radius_mm).theta_deg));
}

double thickness(double n, double f, double diameter, double theta) {
    require_index(n);
    require_focal(f);
    if (!(theta >= 0.0 && theta < kPi / 2.0)) {
        throw DomainError("thickness: ray angle must lie in [0, pi/2)");
    }
    const double landing = 0.5 * diameter - f * std::tan(theta);
    if (landing < -1e-15 * diameter) {
        throw GeometryError("thickness: ray at this angle misses the lens aperture");
    }
    return profile_cartesian(n, f, std::max(landing, 0.0));
}

double phase_shift(double k, double path) {
    if (!(path >= 0.0)) {
        throw DomainError("phase_shift: wave path must be non-negative");
    }
    return k * path;
}

std::complex<double> transmitted_field(std::complex<double> e_in, double k, double path) {
    return std::polar(1.0, k * path) * e_in;
}

double aperture_amplitude(double a_in, double n, double f, double mu, double energy_ratio) {
    require_index(n);
    require_focal(f);
    require_inside_coverage(n, mu, "feed angle");
    const double c = std::cos(mu);
    const double num = n * c - 1.0;
    return a_in * energy_ratio * num * num * num / (f * f * (n - 1.0) * (n - 1.0) * (n - c));
}

AttenuatedAmplitude attenuated_amplitude(double a_prime, double attenuation_per_m, double t, AttenuationMode mode) {
    if (!(t >= 0.0)) {
        throw DomainError("attenuated_amplitude: thickness must be non-negative");
    }
    AttenuatedAmplitude out;
    if (mode == AttenuationMode::Exponential) {
        out.value = a_prime * std::exp(-attenuation_per_m * t);
        out.fully_absorbed = out.value <= 0.0;
        return out;
    }
    const double v = a_prime - attenuation_per_m * t;
    out.fully_absorbed = v <= 0.0 && attenuation_per_m * t > 0.0;
    out.value = std::max(v, 0.0);
    return out;
}

LensProfile sample_profile(double n, double f, double diameter, int count) {
    if (count < 2) {
        throw DomainError("profile needs at least 2 samples");
    }
    if (!(diameter > 0.0)) {
        throw DomainError("lens diameter must be positive");
    }
    LensProfile p;
    p.samples.reserve(static_cast<std::size_t>(count));
    const double rim = 0.5 * diameter;
    for (int i = 0; i < count; ++i) {
        const double y = rim * i / (count - 1);
        p.samples.push_back({profile_cartesian(n, f, y), y});
    }
    p.t_max = p.samples.back().x;
    return p;
}

double wave_path(double n, double f, ProfilePoint p, double aperture_x) {
    return std::hypot(p.x + f, p.y) + n * (aperture_x - p.x);
}

void write_profile_csv(std::ostream& out, const LensProfile& profile) {
    out << "y_mm,x_mm\n";
    for (const auto& s : profile.samples) {
        out << text::format_double(s.y * 1e3) << ',' << text::format_double(s.x * 1e3) << '\n';
    }
}

} // namespace oam
