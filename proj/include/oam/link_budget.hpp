// SPDX-License-Identifier: Apache-2.0
//
// Link budget and Shannon capacity for three transmitter front ends: the bare
// UCA (divergent beams), a single-focal lens, and a bifocal lens. SNR is
// received power over noise power, P_r = G_t A_er P_t / (4 pi d^2).

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oam/beam_model.hpp"
#include "oam/bifocal_design.hpp"
#include "oam/lens_design.hpp"

namespace oam {

struct LinkConfig {
    double tx_power = 1.0;   // W
    double bandwidth = 1e6;  // Hz
    double noise = 1e-12;    // W
    double rx_gain = 1.0;    // receive antenna gain G_0, linear
    double rx_radius = 0.05; // receive aperture radius r_0, m
    double distance = 0.1;   // m
    double wavelength = 0.0; // m
    std::vector<int> modes{1, 2};
    double residual_divergence = deg_to_rad(0.5); // sigma, rad

    void validate() const;
};

enum class ReceptionCase { FullMainLobe, Partial, NoReception };

const char* to_string(ReceptionCase c);

struct SnrCaseResult {
    double snr = 0.0;
    ReceptionCase reception = ReceptionCase::NoReception;
    // Divergent: {d1, d2}. Converged: both equal d_max. Infinity = unbounded.
    double d1 = 0.0;
    double d2 = 0.0;
    bool fully_absorbed = false; // lens loss exceeded the aperture amplitude
    bool off_aperture = false;   // beam angle outside the lens coverage
    std::optional<LensBranch> branch;
};

double effective_aperture(double lambda, double rx_gain);
double received_power(double tx_power, double tx_gain, double aperture, double distance);

// One divergent mode as seen by the receiver: peak angle theta, half-power
// half width, peak gain and the normalized pattern.
struct DivergentBeam {
    int l = 0;
    double theta = 0.0;      // rad
    double half_width = 0.0; // rad
    double peak_gain = 1.0;  // linear
    std::function<double(double)> pattern;
};

// Analytic UCA pattern. A non-positive peak_gain selects the pattern's
// hemispherical directivity.
DivergentBeam divergent_beam(const UcaGeometry& geom, OamMode mode, double peak_gain = 0.0);

// Case boundaries d1 < d2 of a divergent beam for receive radius r_0.
std::pair<double, double> reception_bounds(const DivergentBeam& beam, double rx_radius);

SnrCaseResult snr_divergent(const LinkConfig& cfg, const DivergentBeam& beam);
double capacity_divergent(const LinkConfig& cfg, std::span<const DivergentBeam> beams);

// Shannon sum B * sum log2(1 + snr).
double shannon_capacity(double bandwidth, std::span<const double> snr);

double max_reception_distance(double rx_radius, double sigma);

// Lens-converged SNR with aperture gain G'_l (linear) and beam angle theta_l.
SnrCaseResult snr_converged(const LinkConfig& cfg, const LensSpec& lens, double theta_l, double converged_gain);
double capacity_converged(const LinkConfig& cfg, const LensSpec& lens, std::span<const double> thetas,
                          double converged_gain);

// Bifocal SNR. Modes on the internal branch use the internal-region residual
// divergence for their reception limit, the others cfg.residual_divergence.
SnrCaseResult snr_bifocal(const LinkConfig& cfg, const BifocalSpec& bifocal, const LensSpec& lens, double theta_l,
                          double converged_gain);
double capacity_bifocal(const LinkConfig& cfg, const BifocalSpec& bifocal, const LensSpec& lens,
                        std::span<const double> thetas, double converged_gain);

enum class Scenario { Divergent, Converged, Bifocal };
enum class SweepVariable { Distance, Focal, UcaRadius };
enum class ThetaSource { PowerLaw, Rational, Pattern };
enum class LensSizing { FixedBalance, CoverModes };

const char* to_string(Scenario s);
const char* to_string(SweepVariable v);

// Everything needed to evaluate one scenario at one point.
struct SystemConfig {
    LinkConfig link;
    UcaGeometry uca{16, 0.6 * kSpeedOfLight / 35e9, 35e9, 2.0};

    // Empty: every divergent mode uses its pattern directivity.
    std::vector<double> divergent_peak_gain_dbi;
    double converged_gain_dbi = 19.0;

    double eps_r = 2.2;
    double mu_r = 1.0;
    double focal = 0.03; // m; f_e for the bifocal lens
    LensSizing sizing = LensSizing::FixedBalance;
    double balance = 1.67; // D / f when sizing is FixedBalance
    double attenuation_per_mm = 5.0;
    double energy_ratio = 1e-3;
    AttenuationMode attenuation_mode = AttenuationMode::Linear;
    ThetaSource theta_source = ThetaSource::PowerLaw;

    // Internal focal selection, first present wins: rho, m_int, rho_target,
    // otherwise the smallest m_int with rho > 1.
    std::optional<double> rho;
    std::optional<int> m_int;
    std::optional<double> rho_target;

    void validate() const;
};

double db_to_linear(double db);

// Divergence angle (rad) of mode l under the configured source.
double mode_divergence(const SystemConfig& cfg, int l);

struct LensDesignPoint {
    LensSpec lens;
    std::vector<double> thetas; // per configured mode, rad
};

LensDesignPoint design_single_lens(const SystemConfig& cfg);

struct BifocalDesignPoint {
    BifocalSpec spec;
    LensSpec lens; // diameter, losses; focal = f_e
    std::vector<double> thetas;
    bool m_int_selected = false; // false when rho was given directly
};

BifocalDesignPoint design_bifocal_lens(const SystemConfig& cfg);

struct CurvePoint {
    double x = 0.0;
    double capacity_bps = 0.0;
    std::vector<double> per_mode_snr;
};

CurvePoint evaluate(const SystemConfig& cfg, Scenario scenario);

struct CapacityCurve {
    Scenario scenario = Scenario::Divergent;
    SweepVariable variable = SweepVariable::Distance;
    std::vector<CurvePoint> points;
};

struct SweepRange {
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;
};

CapacityCurve sweep(const SystemConfig& cfg, Scenario scenario, SweepVariable variable, SweepRange range);

// CSV "x,capacity_bps".
void write_curve_csv(std::ostream& out, const CapacityCurve& curve);
// JSON array of {x, capacity_bps, per_mode_snr}.
std::string curve_to_json(const CapacityCurve& curve);

} // namespace oam
