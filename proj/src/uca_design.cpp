// SPDX-License-Identifier: Apache-2.0

#include "oam/uca_design.hpp"

#include <cmath>

#include "json.hpp"

#include "oam/errors.hpp"
#include "oam/numerics.hpp"
#include "oam/version.hpp"

namespace oam {
namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

void require_permittivity(double eps_r) {
    if (!(eps_r >= 1.0) || !std::isfinite(eps_r)) {
        throw DomainError("relative permittivity must be >= 1");
    }
}

} // namespace

double patch_width(double frequency, double eps_r) {
    require_positive(frequency, "frequency");
    require_permittivity(eps_r);
    return kSpeedOfLight / (2.0 * frequency) * std::sqrt(2.0 / (eps_r + 1.0));
}

double effective_permittivity(double eps_r, double h, double w_p) {
    require_permittivity(eps_r);
    require_positive(h, "substrate thickness");
    require_positive(w_p, "patch width");
    return 0.5 * (eps_r + 1.0) + 0.5 * (eps_r - 1.0) / std::sqrt(1.0 + 10.0 * h / w_p);
}

double edge_extension(double h, double eps_re, double w_p) {
    require_positive(h, "substrate thickness");
    require_positive(w_p, "patch width");
    require_permittivity(eps_re);
    const double ratio = w_p / h;
    return 0.412 * h * (eps_re + 0.3) * (ratio + 0.264) / ((eps_re - 0.258) * (ratio + 0.8));
}

double patch_length(double frequency, double eps_re, double delta_l) {
    require_positive(frequency, "frequency");
    require_permittivity(eps_re);
    if (!(delta_l >= 0.0)) {
        throw DomainError("edge extension must be non-negative");
    }
    const double l = kSpeedOfLight / (2.0 * frequency * std::sqrt(eps_re)) - 2.0 * delta_l;
    if (!(l > 0.0)) {
        throw GeometryError("patch length is not positive: substrate too thick for this frequency");
    }
    return l;
}

PatchDesign design_patch(const PatchInputs& inputs) {
    PatchDesign d;
    d.inputs = inputs;
    d.w_p = patch_width(inputs.frequency, inputs.eps_r);
    d.eps_re = effective_permittivity(inputs.eps_r, inputs.h, d.w_p);
    d.delta_l = edge_extension(inputs.h, d.eps_re, d.w_p);
    d.l_p = patch_length(inputs.frequency, d.eps_re, d.delta_l);
    if (!(d.w_p > d.l_p)) {
        throw GeometryError("patch design yields W_P <= L_P");
    }
    return d;
}

double solve_substrate_height(double frequency, double eps_r, double target_eps_re) {
    const double w_p = patch_width(frequency, eps_r);
    const double lo = 0.5 * (eps_r + 1.0);
    if (!(target_eps_re > lo && target_eps_re < eps_r)) {
        throw DomainError("target effective permittivity must lie strictly between (eps_r+1)/2 and eps_r");
    }
    // (1 + 10 h / W)^(-1/2) = s, solved for h.
    const double s = (target_eps_re - lo) / (0.5 * (eps_r - 1.0));
    return w_p * (1.0 / (s * s) - 1.0) / 10.0;
}

std::string patch_report_json(const PatchDesign& d) {
    nlohmann::ordered_json j;
    j["tool"] = kToolTag;
    j["W_P_mm"] = d.w_p * 1e3;
    j["L_P_mm"] = d.l_p * 1e3;
    j["dL_mm"] = d.delta_l * 1e3;
    j["eps_re"] = d.eps_re;
    j["inputs"] = {{"freq_ghz", d.inputs.frequency * 1e-9}, {"eps_r", d.inputs.eps_r}, {"h_mm", d.inputs.h * 1e3}};
    return j.dump(2) + "\n";
}

} // namespace oam
