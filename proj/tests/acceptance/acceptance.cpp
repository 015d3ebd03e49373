// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion.
//   acceptance --summary   run all criteria, exit 1 if any fails
//   acceptance N           run criterion N only

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oam/beam_model.hpp"
#include "oam/bifocal_design.hpp"
#include "oam/lens_design.hpp"
#include "oam/link_budget.hpp"
#include "oam/numerics.hpp"
#include "oam/uca_design.hpp"
#include "oracles.hpp"

using namespace oam;

namespace {

const double kLambda = oracle::kC / 35e9;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) {
                detail << what;
            }
            pass = false;
        }
    }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_err(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

// ------------------------------------------------------------------ 1

void divergence_coefficients(Outcome& o) {
    struct Expected {
        double a, b, p, q;
    };
    const Expected expected[4] = {{147.0, -1.011, 140.9, -0.1902},
                                  {263.2, -1.039, 227.2, -0.5844},
                                  {354.3, -1.028, 317.1, -0.4647},
                                  {676.3, -1.171, 360.7, -2.135}};
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = builtin_divergence_table();
    double worst_coeff = 0.0;
    double worst_rms = 0.0;
    int worst_mode = 0;
    for (int l = 1; l <= 4; ++l) {
        const auto pw = fit_divergence(table, DivergenceForm::PowerLaw, l);
        const auto ra = fit_divergence(table, DivergenceForm::Rational, l);
        const auto& e = expected[l - 1];
        for (double r : {rel_err(pw.model.c0, e.a), rel_err(pw.model.c1, e.b), rel_err(ra.model.c0, e.p),
                         rel_err(ra.model.c1, e.q)}) {
            worst_coeff = std::max(worst_coeff, r);
        }
        const double rms = std::max(pw.fit.residual_rms, ra.fit.residual_rms);
        if (rms > worst_rms) {
            worst_rms = rms;
            worst_mode = l;
        }
    }
    const double secs = elapsed_s(t0);
    o.detail << "max coefficient error " << worst_coeff * 100.0 << "%, max RMS " << worst_rms << " deg (mode "
             << worst_mode << "), " << secs << " s";
    o.pass = worst_coeff <= 0.10 && worst_rms <= 1.5 && secs < 1.0;
}

// ------------------------------------------------------------------ 2

void operating_geometry(Outcome& o) {
    const double n = refraction_index(2.2, 1.0);
    const double f_e = 0.030;
    const double d = 1.67 * f_e;
    const double theta_1 = deg_to_rad(divergence_from_model(
                                          reference_divergence_model(DivergenceForm::PowerLaw, 1), 0.6 * kLambda * 1e3)
                                          .theta_deg);
    const int m = best_matching_m_int(f_e, theta_1, kLambda, 2.17);
    const auto fr = focal_ratio(f_e, theta_1, kLambda, m);
    const double f_i = fr.rho * f_e;
    o.detail << "n=" << n << " D=" << d * 1e3 << " mm m_int=" << m << " rho=" << fr.rho << " f_i=" << f_i * 1e3
             << " mm";
    o.pass = std::fabs(n - 1.48324) <= 1e-4 && rel_err(d, 0.050) <= 0.02 && rel_err(fr.rho, 2.17) <= 0.01 &&
             rel_err(f_i, 0.0653) <= 0.01 && fr.valid;
}

// ------------------------------------------------------------------ 3

void patch_dimensions(Outcome& o) {
    const double w = patch_width(35e9, 2.2);
    o.require(rel_err(w * 1e3, 3.388) <= 0.005, "patch width off");

    // Inversion oracles: the formulas invert consistently.
    const double h = solve_substrate_height(35e9, 2.2, 2.039);
    o.require(std::fabs(effective_permittivity(2.2, h, w) - 2.039) < 1e-12, "eps_re inversion");
    const long double h_dl = oracle::bisect(
        [&](long double t) { return edge_extension(static_cast<double>(t), 2.039, w) - 0.438e-3; }, 1e-6L, 5e-3L);
    o.require(std::fabs(edge_extension(static_cast<double>(h_dl), 2.039, w) - 0.438e-3) < 1e-12, "dL inversion");
    const double lp = patch_length(35e9, 2.039, 0.438e-3);
    o.require(std::fabs(lp + 2.0 * 0.438e-3 - oracle::kC / (2.0 * 35e9 * std::sqrt(2.039))) < 1e-15,
              "L_P formula");
    const auto d = design_patch({35e9, 2.2, h});
    o.require(std::fabs(d.l_p + 2.0 * d.delta_l - oracle::kC / (2.0 * 35e9 * std::sqrt(d.eps_re))) < 1e-15,
              "design consistency");
    if (o.pass) {
        o.detail << "W_P=" << w * 1e3 << " mm; h(2.039)=" << h * 1e3 << " mm gives L_P=" << d.l_p * 1e3
                 << " mm, dL=" << d.delta_l * 1e3 << " mm; quoted dL=0.438 mm needs h=" << h_dl * 1e3 << " mm";
    }
}

// ------------------------------------------------------------------ 4

void wavefront_preservation(Outcome& o) {
    const double radius_mm = 24.2;
    const UcaGeometry g{16, radius_mm * 1e-3, 35e9, 2.0};
    const DipoleExcitation exc;
    const double n = refraction_index(2.2, 1.0);
    const double f = 0.03, diameter = 0.0501;
    const double k = g.wavenumber();
    double worst_phase = 0.0;
    double worst_mag = 0.0;
    for (int l : {1, 2, 4}) {
        const double theta =
            deg_to_rad(divergence_from_model(reference_divergence_model(DivergenceForm::PowerLaw, l), radius_mm)
                           .theta_deg);
        const double r = profile_polar(n, f, theta);
        const ProfilePoint p{r * std::cos(theta) - f, r * std::sin(theta)};
        const double path = wave_path(n, f, p, profile_cartesian(n, f, diameter / 2.0));
        std::vector<std::complex<double>> in, out;
        for (int s = 0; s < 64; ++s) {
            const double phi = 2.0 * kPi * s / 64.0;
            in.push_back(field_amplitude(g, exc, OamMode{l}, 1.0, theta, phi));
            out.push_back(transmitted_field(in.back(), k, path));
        }
        for (int i = 0; i < 64; ++i) {
            worst_mag = std::max(worst_mag, std::fabs(std::abs(out[i]) - std::abs(in[i])) / std::abs(in[i]));
            for (int j = i + 1; j < 64; ++j) {
                const double before = std::arg(in[j] / in[i]);
                const double after = std::arg(out[j] / out[i]);
                worst_phase = std::max(worst_phase, std::fabs(std::remainder(after - before, 2.0 * kPi)));
            }
        }
    }
    const double eps = std::numeric_limits<double>::epsilon();
    o.detail << "max phase-difference change " << worst_phase << " rad, max relative magnitude change " << worst_mag
             << " (" << worst_mag / eps << " ulp)";
    o.pass = worst_phase <= 1e-12 && worst_mag <= 4.0 * eps;
}

// ------------------------------------------------------------------ 5

void fermat_consistency(Outcome& o) {
    const double n = refraction_index(2.2, 1.0);
    const double f = 0.03, diameter = 0.0501;
    const auto profile = sample_profile(n, f, diameter, 512);
    o.require(profile.samples.size() == 512, "sample count");
    const double aperture = profile.t_max;
    const double reference = f + n * aperture;
    double worst_path = 0.0, worst_form = 0.0;
    for (const auto& p : profile.samples) {
        worst_path = std::max(worst_path, std::fabs(wave_path(n, f, p, aperture) - reference));
        const double mu = std::atan2(p.y, p.x + f);
        const double r = profile_polar(n, f, mu);
        worst_form = std::max(worst_form, std::hypot(r * std::cos(mu) - f - p.x, r * std::sin(mu) - p.y));
    }
    o.detail << "max wave-path deviation " << worst_path / f << " f, max polar/cartesian gap " << worst_form << " m";
    o.require(worst_path <= 1e-9 * f, "");
    o.require(worst_form <= 1e-9, "");
}

// ------------------------------------------------------------------ 6

void bifocal_property(Outcome& o) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> fe(0.01, 0.1), rho(1.05, 4.0), idx(1.2, 2.5), frac(0.05, 0.95),
        dscale(0.3, 3.0);
    double worst = 0.0;
    int thinner = 0;
    for (int i = 0; i < 100; ++i) {
        const double n = idx(rng);
        const double nu = frac(rng) * max_feed_angle(n);
        const double f = fe(rng);
        const double r = rho(rng);
        const double d = dscale(rng) * f;
        const auto g = solve_bifocal(f, r, nu, n, d, 64);
        const auto& b = g.boundary;
        worst = std::max(worst, std::fabs(profile_cartesian(n, f, b.y) - b.x));
        worst = std::max(worst, std::fabs(g.offset_c + profile_cartesian(n, r * f, b.y) - b.x));
        thinner += g.internal_center_thickness < g.single_focal_center_thickness;
    }
    o.detail << "max surface residual " << worst << " m, thinner centre in " << thinner << "/100";
    o.pass = worst <= 1e-9 && thinner == 100;
}

// ------------------------------------------------------------------ 7

void capacity_shapes(Outcome& o) {
    SystemConfig op;
    op.rho_target = 2.17;
    double slowest = 0.0;
    const auto timed = [&](const SystemConfig& s, Scenario sc, SweepVariable v, SweepRange r) {
        const auto t0 = std::chrono::steady_clock::now();
        auto c = sweep(s, sc, v, r);
        slowest = std::max(slowest, elapsed_s(t0));
        return c;
    };

    const auto div = timed(op, Scenario::Divergent, SweepVariable::Distance, {0.01, 2.0, 200});
    for (std::size_t i = 1; i < div.points.size(); ++i) {
        o.require(div.points[i].capacity_bps <= div.points[i - 1].capacity_bps, "divergent not non-increasing");
    }
    LinkConfig link = op.link;
    link.wavelength = kLambda;
    for (int l : op.link.modes) {
        const auto beam = divergent_beam(op.uca, OamMode{l});
        const auto [d1, d2] = reception_bounds(beam, link.rx_radius);
        for (const auto& p : div.points) {
            link.distance = p.x;
            const auto res = snr_divergent(link, beam);
            const auto want = p.x < d1 ? ReceptionCase::FullMainLobe
                              : p.x <= d2 ? ReceptionCase::Partial
                                          : ReceptionCase::NoReception;
            o.require(res.reception == want, "case partition");
        }
    }

    SystemConfig conv = op;
    conv.link.modes = {0, 1};
    const auto cf = timed(conv, Scenario::Converged, SweepVariable::Focal, {0.01, 0.04, 200});
    for (std::size_t i = 1; i < cf.points.size(); ++i) {
        o.require(cf.points[i].capacity_bps <= cf.points[i - 1].capacity_bps, "converged not non-increasing");
    }

    SystemConfig bif;
    bif.rho = 2.17;
    bif.sizing = LensSizing::CoverModes;
    const auto br = timed(bif, Scenario::Bifocal, SweepVariable::UcaRadius, {8.8e-3, 24.2e-3, 200});
    for (std::size_t i = 1; i < br.points.size(); ++i) {
        o.require(br.points[i].capacity_bps >= br.points[i - 1].capacity_bps, "bifocal not non-decreasing");
        if (i >= 2) {
            const double a = br.points[i - 1].capacity_bps - br.points[i - 2].capacity_bps;
            const double b = br.points[i].capacity_bps - br.points[i - 1].capacity_bps;
            o.require(b <= a, "bifocal increments increase");
        }
    }

    const double c_bif = evaluate(op, Scenario::Bifocal).capacity_bps;
    const double c_conv = evaluate(op, Scenario::Converged).capacity_bps;
    o.require(c_bif >= c_conv, "bifocal below single-focal at the operating point");
    o.require(slowest < 1.0, "sweep too slow");
    if (o.pass) {
        o.detail << "operating point bifocal " << c_bif << " bps vs single " << c_conv << " bps; slowest sweep "
                 << slowest << " s";
    }
}

// ------------------------------------------------------------------ 8

void numerics_kernel(Outcome& o) {
    double worst_rec = 0.0, worst_par = 0.0;
    for (int l = 1; l <= 10; ++l) {
        for (int i = 0; i <= 4990; ++i) {
            const double x = 0.1 + 0.01 * i;
            worst_rec = std::max(worst_rec, std::fabs(numerics::bessel_j(l - 1, x) + numerics::bessel_j(l + 1, x) -
                                                      2.0 * l / x * numerics::bessel_j(l, x)));
        }
    }
    for (int l = 0; l <= 10; ++l) {
        for (int i = 0; i <= 4990; ++i) {
            const double x = 0.1 + 0.01 * i;
            const double sign = l % 2 == 0 ? 1.0 : -1.0;
            worst_par = std::max(worst_par, std::fabs(numerics::bessel_j(l, -x) - sign * numerics::bessel_j(l, x)));
        }
    }
    const long double ref = oracle::bisect([](long double x) { return oracle::bessel_series(0, x); }, 2.0L, 3.0L);
    const double root = numerics::solve_scalar([](double x) { return numerics::bessel_j(0, x); }, 2.0, 3.0, 1e-13);
    const double gap = std::fabs(root - static_cast<double>(ref));
    o.detail << "recurrence " << worst_rec << ", parity " << worst_par << ", J0 zero gap " << gap;
    o.pass = worst_rec <= 1e-8 && worst_par <= 1e-8 && gap <= 1e-5;
}

// ------------------------------------------------------------------ 9

void winding_number(Outcome& o) {
    const UcaGeometry g{16, 0.6 * kLambda, 35e9, 2.0};
    const DipoleExcitation exc;
    double worst = 0.0;
    constexpr int kSteps = 720;
    for (int l = -4; l <= 4; ++l) {
        double total = 0.0;
        auto prev = field_amplitude(g, exc, OamMode{l}, 1.0, 0.3, 0.0);
        for (int s = 1; s <= kSteps; ++s) {
            const auto cur = field_amplitude(g, exc, OamMode{l}, 1.0, 0.3, 2.0 * kPi * s / kSteps);
            total += std::arg(cur / prev);
            prev = cur;
        }
        worst = std::max(worst, std::fabs(total - 2.0 * kPi * l));
    }
    o.detail << "max winding error " << worst << " rad";
    o.pass = worst <= 1e-9;
}

// ------------------------------------------------------------------ 10

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream b;
    b << in.rdbuf();
    return b.str();
}

void cli_determinism(Outcome& o) {
    const std::string fx = OAM_FIXTURE_DIR;
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"uca", "uca-design --config " + fx + "/uca_design.json"},
        {"uca_csv", "uca-design --config " + fx + "/uca_design.json --format csv"},
        {"fit", "fit-divergence --config " + fx + "/fit_divergence.json"},
        {"fit_csv", "fit-divergence --table " + fx + "/exact_model.csv --format csv"},
        {"lens", "lens-design --config " + fx + "/lens_design.json"},
        {"lens_csv", "lens-design --config " + fx + "/lens_design.json --format csv"},
        {"cap_div", "capacity --config " + fx + "/capacity_divergent_distance.json"},
        {"cap_conv", "capacity --config " + fx + "/capacity_converged_focal.json"},
        {"cap_bif", "capacity --config " + fx + "/capacity_bifocal_radius.json --format json"},
        {"cap_bif_pt", "capacity --config " + fx + "/capacity_bifocal_point.json"},
        {"cap_conv_pt", "capacity --config " + fx + "/capacity_converged_point.json"},
    };
    int identical = 0;
    for (const auto& [tag, args] : runs) {
        std::string outputs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const std::string path = std::string(OAM_BINARY_DIR) + "/determinism_" + tag + "_" + std::to_string(rep);
            std::remove(path.c_str());
            const std::string cmd = std::string("\"") + OAM_CLI_PATH + "\" " + args + " --out \"" + path + "\"";
            const int rc = std::system(cmd.c_str());
            o.require(rc == 0, "command failed: " + args);
            outputs[rep] = slurp(path);
            std::remove(path.c_str());
        }
        o.require(!outputs[0].empty(), "empty output: " + args);
        o.require(outputs[0] == outputs[1], "outputs differ: " + args);
        identical += !outputs[0].empty() && outputs[0] == outputs[1];
    }
    if (o.pass) {
        o.detail << identical << "/" << runs.size() << " commands byte-identical across two runs";
    }
}

struct Criterion {
    int id;
    const char* name;
    void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {1, "divergence-law coefficients within 10% and residual RMS <= 1.5 deg per mode", divergence_coefficients},
    {2, "operating-point refraction index, diameter and internal focal", operating_geometry},
    {3, "patch width; quoted patch length and edge extension inconsistent at the quoted thickness, checked by "
        "inversion only",
     patch_dimensions},
    {4, "lens transmission preserves azimuthal phase differences and magnitudes", wavefront_preservation},
    {5, "single-focal profile has constant wave path and consistent polar/cartesian forms", fermat_consistency},
    {6, "bifocal boundary on both surfaces and thinner centre over 100 random designs", bifocal_property},
    {7, "capacity curve shapes and sweep runtime", capacity_shapes},
    {8, "Bessel recurrence, parity and first J0 zero", numerics_kernel},
    {9, "azimuthal winding number equals l", winding_number},
    {10, "CLI output is byte-identical across runs", cli_determinism},
};

bool run_one(const Criterion& c) {
    Outcome o;
    try {
        c.run(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " exception: " << e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " [" << o.detail.str()
              << "]" << std::endl;
    return o.pass;
}

} // namespace

int main(int argc, char** argv) {
    const std::string arg = argc > 1 ? argv[1] : "--summary";
    if (arg == "--summary") {
        int failed = 0;
        for (const auto& c : kCriteria) {
            failed += !run_one(c);
        }
        std::cout << (std::size(kCriteria) - failed) << "/" << std::size(kCriteria) << " criteria passed"
                  << std::endl;
        return failed == 0 ? 0 : 1;
    }
    const int id = std::atoi(arg.c_str());
    for (const auto& c : kCriteria) {
        if (c.id == id) {
            return run_one(c) ? 0 : 1;
        }
    }
    std::cerr << "usage: acceptance [--summary | N]\n";
    return 2;
}
