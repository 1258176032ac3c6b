#pragma once

#include <charsub/error.hpp>

#include <cstddef>
#include <cstdlib>
#include <string>
#include <string_view>

namespace charsub {

/// Resource caps shared by every module.
///
/// `CHARSUB_CAPS` overrides any subset, e.g. `CHARSUB_CAPS="index=8192,grid=1048576"`.
/// Keys: index (largest term index), bits (largest term size in bits), grid (largest
/// enumeration grid u_N), horizon (scan horizon for searches), cycle (steps allowed for
/// orbit cycle detection).
struct Caps {
    std::size_t max_index = 4096;
    std::size_t max_term_bits = std::size_t{1} << 24;
    std::size_t max_grid = std::size_t{1} << 24;
    std::size_t horizon = 4096;
    std::size_t cycle_steps = std::size_t{1} << 22;
};

namespace detail {

inline std::size_t parse_cap_value(std::string_view key, std::string_view text) {
    if (text.empty()) throw ParseError("empty value for cap '" + std::string(key) + "'");
    std::size_t value = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '9')
            throw ParseError("cap '" + std::string(key) + "' is not a positive integer");
        value = value * 10 + static_cast<std::size_t>(ch - '0');
    }
    if (value == 0) throw ParseError("cap '" + std::string(key) + "' must be positive");
    return value;
}

}  // namespace detail

/// Parses a comma separated `key=value` list on top of `base`.
inline Caps parse_caps(std::string_view text, Caps base = {}) {
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError("cap entry without '=': " + std::string(item));
        auto key = item.substr(0, eq);
        auto value = detail::parse_cap_value(key, item.substr(eq + 1));
        if (key == "index") base.max_index = value;
        else if (key == "bits") base.max_term_bits = value;
        else if (key == "grid") base.max_grid = value;
        else if (key == "horizon") base.horizon = value;
        else if (key == "cycle") base.cycle_steps = value;
        else throw ParseError("unknown cap '" + std::string(key) + "'");
    }
    return base;
}

inline Caps caps_from_env() {
    const char* env = std::getenv("CHARSUB_CAPS");
    return env ? parse_caps(env) : Caps{};
}

}  // namespace charsub
