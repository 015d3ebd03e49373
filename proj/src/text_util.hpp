// SPDX-License-Identifier: Apache-2.0
// Locale-independent number parsing/formatting shared by the CSV readers
// and writers.

#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "oam/errors.hpp"

namespace oam::text {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_double(std::string_view field) {
    field = trim(field);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        throw ConfigError("not a number: '" + std::string(field) + "'");
    }
    return value;
}

// Shortest representation that round-trips; stable across runs.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

} // namespace oam::text
