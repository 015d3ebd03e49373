// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace oam::cli {

// Entry point of the oamlens tool. Exit codes: 0 success, 2 usage or
// validation failure, 1 internal error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace oam::cli
