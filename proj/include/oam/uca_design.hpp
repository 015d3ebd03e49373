// SPDX-License-Identifier: Apache-2.0
//
// Rectangular microstrip patch sizing for the UCA elements (transmission-line
// model). Frequencies in Hz, lengths in metres.

#pragma once

#include <string>

namespace oam {

struct PatchInputs {
    double frequency = 0.0;
    double eps_r = 0.0;
    double h = 0.0; // substrate thickness
};

struct PatchDesign {
    double w_p = 0.0;
    double l_p = 0.0;
    double delta_l = 0.0;
    double eps_re = 0.0;
    PatchInputs inputs;
};

double patch_width(double frequency, double eps_r);
double effective_permittivity(double eps_r, double h, double w_p);
double edge_extension(double h, double eps_re, double w_p);
// Throws GeometryError when the edge extensions consume the half wavelength.
double patch_length(double frequency, double eps_re, double delta_l);

PatchDesign design_patch(const PatchInputs& inputs);

// Substrate thickness at which effective_permittivity(eps_r, h, W_P) equals
// target; requires (eps_r + 1)/2 < target < eps_r.
double solve_substrate_height(double frequency, double eps_r, double target_eps_re);

// {"W_P_mm", "L_P_mm", "dL_mm", "eps_re", "inputs": {...}} plus a tool tag.
std::string patch_report_json(const PatchDesign& design);

} // namespace oam
