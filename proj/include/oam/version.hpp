// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace oam {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolTag = "oamlens 0.1.0";

} // namespace oam
