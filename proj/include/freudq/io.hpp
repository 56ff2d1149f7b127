#pragma once

/* CSV and JSON serialization. Doubles are written with 17 significant
 * digits so they re-parse to the same bits.
 */

#include "freudq/gaussquad.hpp"
#include "freudq/orthopoly.hpp"
#include "freudq/wce.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace freudq {

inline constexpr const char* tool_version = "0.1.0";

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_coeffs_csv(std::ostream& os, const FreudBasis& basis) {
    os << "k,a_k\n";
    for (int k = 1; k <= basis.n_max(); ++k) os << k << ',' << format_double(basis.a(k)) << '\n';
}

inline void write_rule_csv(std::ostream& os, const QuadratureRule& rule) {
    os << "index,node,omega,tau\n";
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        os << i << ',' << format_double(rule.nodes[i]) << ',' << format_double(rule.omega[i]) << ','
           << format_double(rule.tau[i]) << '\n';
}

inline void write_wce_csv(std::ostream& os, const WCETable& table) {
    os << "n,wce,log10_wce\n";
    for (const auto& r : table.rows) {
        const bool ok = !r.failed && r.wce > 0.0;
        os << r.n << ',' << (r.failed ? "nan" : format_double(r.wce)) << ','
           << (ok ? format_double(std::log10(r.wce)) : "nan") << '\n';
    }
}

namespace detail {

inline nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace detail

/// Keys: space, params, axis, rows, slope, intercept, theory_slope, seed, tool_version.
inline nlohmann::json to_json(const WCETable& table) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : table.params)
        std::visit([&](const auto& v) { params[key] = v; }, value);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows) {
        nlohmann::json row{{"n", r.n}, {"wce", detail::json_number(r.wce)}};
        if (r.clamped) row["clamped"] = true;
        if (r.failed) {
            row["failed"] = true;
            row["error"] = r.error;
        }
        rows.push_back(std::move(row));
    }
    return {{"space", table.space},
            {"params", params},
            {"axis", to_string(table.axis)},
            {"rows", rows},
            {"slope", detail::json_number(table.slope)},
            {"intercept", detail::json_number(table.intercept)},
            {"theory_slope", detail::json_number(table.theory_slope)},
            {"seed", table.seed},
            {"tool_version", tool_version}};
}

} // namespace freudq
