// SPDX-License-Identifier: Apache-2.0
//
// Single-focal hyperbolic dielectric lens: one refracting surface facing the
// feed, flat back at the aperture plane. Coordinates put the lens vertex at
// the origin, the feed (focus) at x = -f on the axis, x axial and y radial.
// All lengths in metres, angles in radians.

#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "oam/beam_model.hpp"

namespace oam {

enum class AttenuationMode {
    Linear,      // A = A' - p T, clamped at zero
    Exponential, // A = A' exp(-p T); sensitivity option
};

struct LensSpec {
    double n = 1.0;                 // refraction index
    double focal = 0.0;             // m
    double diameter = 0.0;          // m
    double attenuation_per_m = 0.0; // amplitude loss per metre of thickness
    double energy_ratio = 1.0;      // fraction of feed energy entering the lens
    AttenuationMode attenuation_mode = AttenuationMode::Linear;

    void validate() const;
};

// Material loss factors are quoted on a millimetre thickness scale (1..10).
inline constexpr double attenuation_from_per_mm(double per_mm) { return per_mm * 1e3; }

struct ProfilePoint {
    double x = 0.0; // axial
    double y = 0.0; // radial
};

struct LensProfile {
    std::vector<ProfilePoint> samples;
    double t_max = 0.0; // axial depth of the rim plane behind the vertex
};

double refraction_index(double eps_r, double mu_r);

// Feed-to-surface distance at feed angle mu: (n-1) f / (n cos(mu) - 1).
double profile_polar(double n, double f, double mu);

// Non-negative root x of (n^2-1) x^2 + 2 (n-1) f x - y^2 = 0.
double profile_cartesian(double n, double f, double y);

// Asymptote of the hyperbola, arccos(1/n).
double max_feed_angle(double n);

double diameter_for(double n, double f, double theta_max);

// D / f for a lens whose rim is reached at feed angle theta_max.
double balance_coefficient(double n, double theta_max);

// balance_coefficient with theta_max taken from an empirical divergence law at
// UCA radius R (mm).
double balance_coefficient_for_model(double n, const DivergenceModel& model, double radius_mm);

// Lens thickness crossed by the ray leaving the feed at theta: the surface sag
// at radius D/2 - f tan(theta). Throws GeometryError if the ray misses the lens.
double thickness(double n, double f, double diameter, double theta);

double phase_shift(double k, double path);

// e^{i k dL} E_in.
std::complex<double> transmitted_field(std::complex<double> e_in, double k, double path);

// Aperture amplitude after energy redistribution at feed angle mu:
// A_in a (n cos mu - 1)^3 / (f^2 (n-1)^2 (n - cos mu)).
double aperture_amplitude(double a_in, double n, double f, double mu, double energy_ratio);

struct AttenuatedAmplitude {
    double value = 0.0;
    bool fully_absorbed = false;
};

AttenuatedAmplitude attenuated_amplitude(double a_prime, double attenuation_per_m, double t,
                                         AttenuationMode mode = AttenuationMode::Linear);

// Surface sampled uniformly in y on [0, D/2].
LensProfile sample_profile(double n, double f, double diameter, int count = 512);

// Optical path from the feed to the aperture plane x = aperture_x through the
// surface point p: |feed -> p| + n (aperture_x - p.x).
double wave_path(double n, double f, ProfilePoint p, double aperture_x);

// CSV "y_mm,x_mm".
void write_profile_csv(std::ostream& out, const LensProfile& profile);

} // namespace oam
