// SPDX-License-Identifier: Apache-2.0
//
// Bifocal lens: an internal region with the long focal distance f_i (thin
// centre) and an external region with the short focal distance f_e, sharing
// the axis and joined where the ray at boundary angle nu from the external
// focus meets the external surface. Same coordinates as lens_design.hpp: feed
// at x = -f_e, external vertex at the origin, x axial, y radial.

#pragma once

#include <iosfwd>

#include "oam/lens_design.hpp"

namespace oam {

struct BifocalSpec {
    double f_e = 0.0;    // external focal distance, m
    double f_i = 0.0;    // internal focal distance, m
    double nu = 0.0;     // boundary angle, rad
    double n = 1.0;      // refraction index
    int m_int = 1;       // wavelength multiple used to derive f_i
    double lambda = 0.0; // m

    double rho() const { return f_i / f_e; }
    void validate() const;
};

// Midpoint of two adjacent divergence angles.
double boundary_angle(double theta_lo, double theta_hi);

// sqrt((m lambda + f_e / cos(theta_1)) f_e tan(theta_1)).
double internal_focal(double f_e, double theta_1, double lambda, int m_int);

struct FocalRatio {
    double rho = 0.0;
    bool valid = false; // rho > 1
};

FocalRatio focal_ratio(double f_e, double theta_1, double lambda, int m_int);

// Smallest m_int giving rho > 1.
int smallest_valid_m_int(double f_e, double theta_1, double lambda);
// m_int minimizing |rho - target| (first minimum wins).
int best_matching_m_int(double f_e, double theta_1, double lambda, double rho_target);

// f_i that makes f_i / cos(theta_fi) - f_e / cos(theta_1) = m lambda exactly
// together with f_i tan(theta_fi) = f_e tan(theta_1). Unlike internal_focal
// this satisfies the wave-path matching condition without approximation.
double path_matched_internal_focal(double f_e, double theta_1, double lambda, int m_int);

// Angle from the internal focus to the point where the external-focus ray at
// theta lands: f_i tan(theta_fi) = f_e tan(theta).
double internal_feed_angle(double f_e, double f_i, double theta);

struct BifocalGeometry {
    LensProfile internal_profile;
    LensProfile external_profile; // empty when the boundary lies beyond the rim
    double offset_c = 0.0;        // axial position of the internal vertex
    ProfilePoint boundary;        // junction of the two surfaces
    bool boundary_inside_aperture = false;
    double aperture_x = 0.0;                 // rim plane
    double internal_center_thickness = 0.0;  // aperture_x - offset_c
    double single_focal_center_thickness = 0.0; // f_e lens of the same diameter
};

// Point where the ray at angle nu from the external focus meets the external
// surface. Requires 0 < nu < arccos(1/n).
ProfilePoint bifocal_boundary_point(double f_e, double nu, double n);

BifocalGeometry solve_bifocal(double f_e, double rho, double nu, double n, double diameter, int samples = 512);

// Residual divergence of an external-focus ray at theta_l through the internal
// region, theta_l_fi being the same ray's angle seen from the internal focus.
double residual_divergence(double theta_l, double theta_l_fi, double n);

double wave_path_external_focus(double f_e, double theta_l, double t_max, double tau, double n);
double wave_path_internal_focus(double f_i, double theta_l_fi, double t_max, double n);

struct PathMatch {
    double theta_fi = 0.0;
    double tau = 0.0;
    double difference = 0.0; // L(f_i) - L(f_e)
    double target = 0.0;     // m_int lambda
    double mismatch = 0.0;   // |difference - target|
    // n T_max (1/cos(tau) - 1): error of dropping the obliquity of the
    // in-lens segment.
    double bound = 0.0;
};

PathMatch wave_path_match(const BifocalSpec& spec, double theta_l, double t_max);

enum class LensBranch { Internal, External };

struct BifocalAmplitude {
    AttenuatedAmplitude amplitude;
    LensBranch branch = LensBranch::External;
    double feed_angle = 0.0; // angle seen from the branch's focus
    double thickness = 0.0;
};

// Piecewise amplitude: theta < nu goes through the internal (f_i) region,
// theta >= nu through the external (f_e) region. The lens argument supplies
// diameter, loss factor, energy ratio and attenuation mode.
BifocalAmplitude bifocal_amplitude(double a_in, double theta, const BifocalSpec& spec, const LensSpec& lens);

// CSV "region,y_mm,x_mm".
void write_bifocal_csv(std::ostream& out, const BifocalGeometry& geometry);

} // namespace oam
