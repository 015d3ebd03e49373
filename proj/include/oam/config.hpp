// SPDX-License-Identifier: Apache-2.0
//
// JSON configuration for capacity runs. Layout documented in
// docs/capacity_config.schema.json; unknown keys are rejected.

#pragma once

#include <string>

#include "oam/link_budget.hpp"

namespace oam {

struct CapacityRun {
    SystemConfig system;
    Scenario scenario = Scenario::Divergent;
    SweepVariable variable = SweepVariable::Distance;
    SweepRange range{0.05, 1.0, 200};
};

Scenario parse_scenario(const std::string& name);
SweepVariable parse_sweep_variable(const std::string& name);

CapacityRun parse_capacity_config(const std::string& json_text);
CapacityRun load_capacity_config(const std::string& path);

} // namespace oam
