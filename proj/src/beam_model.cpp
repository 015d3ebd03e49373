// SPDX-License-Identifier: Apache-2.0

#include "oam/beam_model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "oam/errors.hpp"
#include "text_util.hpp"

namespace oam {
namespace {

constexpr int kPeakGridPoints = 4096;
constexpr double kHalfPi = kPi / 2.0;
constexpr double kAngleSlack = 1e-12;

void check_polar_angle(double theta) {
    if (!(theta >= -kAngleSlack && theta <= kHalfPi + kAngleSlack)) {
        throw DomainError("polar angle must lie in [0, pi/2]");
    }
}

} // namespace

void UcaGeometry::validate() const {
    if (n_elements < 4) {
        throw DomainError("UCA needs at least 4 elements");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("UCA radius must be positive");
    }
    if (!(frequency > 0.0) || !std::isfinite(frequency)) {
        throw DomainError("UCA frequency must be positive");
    }
    if (!(bessel_argument_factor > 0.0)) {
        throw DomainError("bessel_argument_factor must be positive");
    }
}

void validate_mode(const UcaGeometry& geom, OamMode mode) {
    // -N/2 <= l < N/2, written without division so odd N is exact.
    if (2 * mode.l < -geom.n_elements || 2 * mode.l >= geom.n_elements) {
        throw DomainError("OAM mode " + std::to_string(mode.l) + " not supported by a " +
                          std::to_string(geom.n_elements) + "-element UCA");
    }
}

std::complex<double> field_amplitude(const UcaGeometry& geom, const DipoleExcitation& exc, OamMode mode,
                                     double r, double theta, double phi) {
    geom.validate();
    validate_mode(geom, mode);
    if (!(r > 0.0)) {
        throw GeometryError("field_amplitude: r must be positive (1/r singularity at the array centre)");
    }
    check_polar_angle(theta);
    using namespace std::complex_literals;
    const double k = geom.wavenumber();
    const double omega = 2.0 * kPi * geom.frequency;
    const double magnitude =
        -exc.current_density * exc.permeability * omega * exc.dipole_length / (4.0 * kPi) * geom.n_elements / r;
    // i^{-l} e^{ikr}
    const std::complex<double> carrier = std::polar(1.0, k * r - kHalfPi * mode.l);
    const std::complex<double> amplitude = magnitude * carrier;
    const double bessel = numerics::bessel_j_signed(mode.l, geom.bessel_scale() * std::sin(theta));
    return amplitude * std::polar(1.0, mode.l * phi) * bessel;
}

BeamPattern::BeamPattern(const UcaGeometry& geom, OamMode mode) : l_(mode.l) {
    geom.validate();
    validate_mode(geom, mode);
    scale_ = geom.bessel_scale();
    if (l_ == 0) {
        peak_angle_ = 0.0;
        peak_raw_ = 1.0;
        return;
    }
    const double step = kHalfPi / kPeakGridPoints;
    int best = 1;
    double best_val = raw(step);
    for (int i = 2; i <= kPeakGridPoints; ++i) {
        const double v = raw(i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = (best - 1) * step;
    const double hi = std::min(kHalfPi, (best + 1) * step);
    const double refined = numerics::golden_section_max([this](double t) { return raw(t); }, lo, hi, 1e-13);
    const double refined_val = raw(refined);
    if (refined_val >= best_val) {
        peak_angle_ = refined;
        peak_raw_ = refined_val;
    } else {
        peak_angle_ = best * step;
        peak_raw_ = best_val;
    }
}

double BeamPattern::raw(double theta) const {
    const double j = numerics::bessel_j_signed(l_, scale_ * std::sin(theta));
    return j * j;
}

double BeamPattern::gain(double theta) const {
    check_polar_angle(theta);
    return std::min(1.0, raw(theta) / peak_raw_);
}

Beamwidth BeamPattern::half_power() const {
    const auto half = [this](double t) { return raw(t) / peak_raw_ - 0.5; };
    const double step = kHalfPi / kPeakGridPoints;
    constexpr double tol = 1e-13;

    Beamwidth bw;
    // Upper crossing: first grid point past the peak below one half.
    double prev = peak_angle_;
    double upper = -1.0;
    for (double t = peak_angle_ + step; t <= kHalfPi + 0.5 * step; t += step) {
        const double tt = std::min(t, kHalfPi);
        if (half(tt) < 0.0) {
            upper = numerics::solve_scalar(half, prev, tt, tol);
            break;
        }
        prev = tt;
    }
    if (upper < 0.0) {
        throw GeometryError("half-power beamwidth undefined: pattern of mode " + std::to_string(l_) +
                            " stays above one half up to pi/2");
    }
    bw.upper = upper;
    if (l_ == 0) {
        bw.lower = 0.0;
        bw.half_width = upper;
        return bw;
    }
    prev = peak_angle_;
    double lower = -1.0;
    for (double t = peak_angle_ - step;; t -= step) {
        const double tt = std::max(t, 0.0);
        if (half(tt) < 0.0) {
            lower = numerics::solve_scalar(half, tt, prev, tol);
            break;
        }
        if (tt == 0.0) {
            break;
        }
        prev = tt;
    }
    if (lower < 0.0) {
        throw GeometryError("half-power beamwidth undefined: no lower crossing for mode " + std::to_string(l_));
    }
    bw.lower = lower;
    bw.half_width = 0.5 * (upper - lower);
    return bw;
}

double BeamPattern::directivity() const {
    const double integral =
        numerics::simpson([this](double t) { return raw(t) / peak_raw_ * std::sin(t); }, 0.0, kHalfPi, 4096);
    return 2.0 / integral;
}

double pattern_gain(const UcaGeometry& geom, OamMode mode, double theta) {
    return BeamPattern(geom, mode).gain(theta);
}

double peak_divergence_angle(const UcaGeometry& geom, OamMode mode) {
    return BeamPattern(geom, mode).peak_angle();
}

Beamwidth half_power_beamwidth(const UcaGeometry& geom, OamMode mode) {
    return BeamPattern(geom, mode).half_power();
}

double pattern_directivity(const UcaGeometry& geom, OamMode mode) {
    return BeamPattern(geom, mode).directivity();
}

ModelEvaluation divergence_from_model(const DivergenceModel& model, double radius_mm) {
    ModelEvaluation out;
    out.in_range = radius_mm >= model.r_min_mm && radius_mm <= model.r_max_mm;
    if (model.form == DivergenceForm::PowerLaw) {
        if (!(radius_mm > 0.0)) {
            throw DomainError("power-law divergence model needs R > 0");
        }
        out.theta_deg = model.c0 * std::pow(radius_mm, model.c1);
    } else {
        if (!(radius_mm + model.c1 > 0.0)) {
            throw DomainError("rational divergence model evaluated at or beyond its pole");
        }
        out.theta_deg = model.c0 / (radius_mm + model.c1);
    }
    return out;
}

DivergenceModel reference_divergence_model(DivergenceForm form, int mode_l) {
    static constexpr std::array<std::array<double, 4>, 4> kCoefficients{{
        {147.0, -1.011, 140.9, -0.1902},
        {263.2, -1.039, 227.2, -0.5844},
        {354.3, -1.028, 317.1, -0.4647},
        {676.3, -1.171, 360.7, -2.135},
    }};
    if (mode_l < 1 || mode_l > 4) {
        throw DomainError("reference divergence models exist for modes 1..4 only");
    }
    const auto& row = kCoefficients[static_cast<std::size_t>(mode_l - 1)];
    DivergenceModel m;
    m.form = form;
    m.mode_l = mode_l;
    m.c0 = form == DivergenceForm::PowerLaw ? row[0] : row[2];
    m.c1 = form == DivergenceForm::PowerLaw ? row[1] : row[3];
    return m;
}

void DivergenceTable::validate() const {
    if (rows.empty()) {
        throw ConfigError("divergence table is empty");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!(r.radius_mm > 0.0)) {
            throw ConfigError("divergence table radius must be positive");
        }
        for (std::size_t m = 0; m < 4; ++m) {
            if (!(r.theta_deg[m] > 0.0 && r.theta_deg[m] < 90.0)) {
                throw ConfigError("divergence angles must lie in (0, 90) degrees");
            }
            if (m > 0 && !(r.theta_deg[m] > r.theta_deg[m - 1])) {
                throw ConfigError("divergence must increase with mode index at R = " + text::format_double(r.radius_mm));
            }
        }
        if (i > 0) {
            const auto& p = rows[i - 1];
            if (!(r.radius_mm > p.radius_mm)) {
                throw ConfigError("divergence table radii must be strictly increasing");
            }
            for (std::size_t m = 0; m < 4; ++m) {
                if (!(r.theta_deg[m] < p.theta_deg[m])) {
                    throw ConfigError("divergence of mode " + std::to_string(m + 1) + " must decrease with R");
                }
            }
        }
    }
}

std::vector<numerics::Sample> DivergenceTable::samples(int mode_l) const {
    if (mode_l < 1 || mode_l > 4) {
        throw DomainError("divergence table holds modes 1..4");
    }
    std::vector<numerics::Sample> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back({r.radius_mm, r.theta_deg[static_cast<std::size_t>(mode_l - 1)]});
    }
    return out;
}

DivergenceTable builtin_divergence_table() {
    static const std::array<double, 15> radius{8.8, 9.9, 11.0, 12.1, 13.2, 14.3, 15.4, 16.5,
                                               17.6, 18.7, 19.8, 20.9, 22.0, 23.1, 24.2};
    static const std::array<std::array<double, 15>, 4> theta{{
        {16.4, 14.7, 12.9, 12.1, 10.9, 9.6, 8.7, 8.3, 8.1, 8.0, 7.6, 7.1, 6.6, 6.1, 5.8},
        {27.7, 25.3, 21.5, 19.2, 17.5, 16.6, 15.4, 14.0, 12.8, 12.2, 12.0, 11.8, 11.3, 10.5, 9.9},
        {38.4, 34.7, 29.0, 26.9, 25.1, 22.0, 20.1, 19.2, 18.9, 18.3, 17.2, 16.2, 15.0, 14.2, 13.5},
        {57.0, 44.3, 41.0, 33.8, 30.5, 29.3, 28.3, 24.5, 22.5, 21.8, 21.4, 21.1, 19.9, 18.5, 17.3},
    }};
    DivergenceTable t;
    for (std::size_t i = 0; i < radius.size(); ++i) {
        t.rows.push_back({radius[i], {theta[0][i], theta[1][i], theta[2][i], theta[3][i]}});
    }
    return t;
}

DivergenceTable parse_divergence_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("divergence CSV is empty");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line.erase(0, 3); // UTF-8 BOM
    }
    if (text::trim(line) != kDivergenceCsvHeader) {
        throw ConfigError(std::string("divergence CSV header must be '") + kDivergenceCsvHeader + "'");
    }
    DivergenceTable t;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        const auto fields = text::split(line, ',');
        if (fields.size() != 5) {
            throw ConfigError("divergence CSV line " + std::to_string(line_no) + ": expected 5 fields");
        }
        DivergenceRow row;
        row.radius_mm = text::parse_double(fields[0]);
        for (std::size_t m = 0; m < 4; ++m) {
            row.theta_deg[m] = text::parse_double(fields[m + 1]);
        }
        t.rows.push_back(row);
    }
    t.validate();
    return t;
}

DivergenceTable load_divergence_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open divergence CSV '" + path + "'");
    }
    return parse_divergence_csv(in);
}

FittedDivergence fit_divergence(const DivergenceTable& table, DivergenceForm form, int mode_l) {
    const auto samples = table.samples(mode_l);
    FittedDivergence out;
    out.fit = form == DivergenceForm::PowerLaw ? numerics::fit_power_model(samples)
                                               : numerics::fit_rational_model(samples);
    out.model.form = form;
    out.model.mode_l = mode_l;
    out.model.c0 = out.fit.params[0];
    out.model.c1 = out.fit.params[1];
    out.model.r_min_mm = table.rows.front().radius_mm;
    out.model.r_max_mm = table.rows.back().radius_mm;
    return out;
}

} // namespace oam
