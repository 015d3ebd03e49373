// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "oam/numerics.hpp"

namespace oam {

// Transmit uniform circular array. Lengths in metres, frequency in Hz.
struct UcaGeometry {
    int n_elements = 16;
    double radius = 0.0;    // array centre to patch centre
    double frequency = 0.0;
    // Multiplier on k*R inside the far-field Bessel argument. The vortex-beam
    // expression used here carries 2*k*R*sin(theta); the textbook array factor
    // has k*R*sin(theta), reachable by setting this to 1.
    double bessel_argument_factor = 2.0;

    double wavelength() const { return kSpeedOfLight / frequency; }
    double wavenumber() const { return 2.0 * kPi * frequency / kSpeedOfLight; }
    // Argument of J_l at theta = pi/2.
    double bessel_scale() const { return bessel_argument_factor * wavenumber() * radius; }

    void validate() const;
};

struct OamMode {
    int l = 0;
};

// Throws DomainError unless -N/2 <= l < N/2.
void validate_mode(const UcaGeometry& geom, OamMode mode);

struct DipoleExcitation {
    double current_density = 1.0; // A/m^2
    double dipole_length = 1e-3;  // m
    double permeability = kVacuumPermeability;
};

// Complex far field A(r) e^{i l phi} J_l(2 k R sin(theta)).
std::complex<double> field_amplitude(const UcaGeometry& geom, const DipoleExcitation& exc, OamMode mode,
                                     double r, double theta, double phi);

struct Beamwidth {
    double lower = 0.0; // lower half-power crossing, rad (0 for l = 0)
    double upper = 0.0; // upper half-power crossing, rad
    // Half of the crossing-to-crossing width; for l = 0 the single crossing.
    double half_width = 0.0;
};

// Normalized far-field power pattern |J_l(X sin(theta))|^2 / max for one mode.
// Construction runs the peak search once so repeated evaluation is cheap.
class BeamPattern {
public:
    BeamPattern(const UcaGeometry& geom, OamMode mode);

    // In [0, 1]; theta in [0, pi/2].
    double gain(double theta) const;
    // Pattern maximum over (0, pi/2]; 0 for the plane-wave mode.
    double peak_angle() const { return peak_angle_; }
    // Throws GeometryError if the pattern never drops to one half in (0, pi/2).
    Beamwidth half_power() const;
    // Peak directivity assuming radiation into the forward hemisphere only.
    double directivity() const;

    int l() const { return l_; }

private:
    double raw(double theta) const;

    int l_ = 0;
    double scale_ = 0.0;
    double peak_angle_ = 0.0;
    double peak_raw_ = 1.0;
};

double pattern_gain(const UcaGeometry& geom, OamMode mode, double theta);
double peak_divergence_angle(const UcaGeometry& geom, OamMode mode);
Beamwidth half_power_beamwidth(const UcaGeometry& geom, OamMode mode);
double pattern_directivity(const UcaGeometry& geom, OamMode mode);

// Empirical divergence-angle laws, theta in degrees against R in millimetres.
enum class DivergenceForm { PowerLaw, Rational };

struct DivergenceModel {
    DivergenceForm form = DivergenceForm::PowerLaw;
    int mode_l = 1;
    // PowerLaw: theta = c0 * R^c1 (a, b). Rational: theta = c0 / (R + c1) (p, q).
    double c0 = 0.0;
    double c1 = 0.0;
    double r_min_mm = 8.8;
    double r_max_mm = 24.2;
};

struct ModelEvaluation {
    double theta_deg = 0.0;
    bool in_range = true;
};

// Evaluates the law; R outside the valid range is still evaluated but flagged.
ModelEvaluation divergence_from_model(const DivergenceModel& model, double radius_mm);

// Shipped coefficients for modes 1..4, fitted to the built-in table.
DivergenceModel reference_divergence_model(DivergenceForm form, int mode_l);

struct DivergenceRow {
    double radius_mm = 0.0;
    std::array<double, 4> theta_deg{};
};

struct DivergenceTable {
    std::vector<DivergenceRow> rows;

    // R strictly increasing, every column strictly decreasing in R and every
    // row strictly increasing in mode index.
    void validate() const;
    std::vector<numerics::Sample> samples(int mode_l) const;
};

// Simulated radius-vs-divergence data for a 16-element UCA at 35 GHz.
DivergenceTable builtin_divergence_table();

inline constexpr const char* kDivergenceCsvHeader = "R_mm,theta1_deg,theta2_deg,theta3_deg,theta4_deg";
DivergenceTable parse_divergence_csv(std::istream& in);
DivergenceTable load_divergence_csv(const std::string& path);

struct FittedDivergence {
    DivergenceModel model;
    numerics::FitResult fit;
};

FittedDivergence fit_divergence(const DivergenceTable& table, DivergenceForm form, int mode_l);

} // namespace oam
