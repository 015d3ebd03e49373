// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace oam {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kVacuumPermeability = 1.25663706212e-6; // H/m

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

namespace numerics {

inline constexpr int kMaxBesselOrder = 64;
inline constexpr double kMaxBesselArgument = 1e4;

// Bessel function of the first kind J_order(x) for integer order 0..64 and
// |x| <= 1e4. Power series (extended precision) below |x| = 20, normalized
// Miller downward recurrence above. Absolute error is below 1e-10 for
// |x| <= 100.
double bessel_j(int order, double x);

// J_l for a signed order, using J_{-l}(x) = (-1)^l J_l(x).
double bessel_j_signed(int order, double x);

// One (abscissa, ordinate) observation for the two-parameter curve fits.
struct Sample {
    double x;
    double y;
};

struct FitResult {
    std::vector<double> params;
    double residual_rms = 0.0;
    int iterations = 0;
};

// y = a * x^b, params = {a, b}.
FitResult fit_power_model(std::span<const Sample> samples);

// y = p / (x + q), params = {p, q}.
FitResult fit_rational_model(std::span<const Sample> samples);

// Root of f inside [lo, hi] by Brent's method. Requires f(lo) * f(hi) <= 0;
// the returned point sits inside a final bracket no wider than tol (up to
// rounding of the abscissa itself).
double solve_scalar(const std::function<double(double)>& f, double lo, double hi, double tol);

// Abscissa of the maximum of a unimodal f on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol);

// Composite Simpson rule with an even number of intervals.
double simpson(const std::function<double(double)>& f, double lo, double hi, int intervals);

} // namespace numerics
} // namespace oam
