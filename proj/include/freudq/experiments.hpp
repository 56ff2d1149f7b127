#pragma once

/* Decay experiments for Gauss and perturbed-Gauss (MZ) rules at alpha = 2. */

#include "freudq/errors.hpp"
#include "freudq/gaussquad.hpp"
#include "freudq/mzframe.hpp"
#include "freudq/orthopoly.hpp"
#include "freudq/spaces.hpp"
#include "freudq/wce.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace freudq {

enum class FigureId { fig1a, fig1b, fig2a, fig2b, fig3a, fig3b, fig3c };

inline std::string to_string(FigureId id) {
    switch (id) {
    case FigureId::fig1a: return "fig1a";
    case FigureId::fig1b: return "fig1b";
    case FigureId::fig2a: return "fig2a";
    case FigureId::fig2b: return "fig2b";
    case FigureId::fig3a: return "fig3a";
    case FigureId::fig3b: return "fig3b";
    case FigureId::fig3c: return "fig3c";
    }
    return "?";
}

inline std::optional<FigureId> parse_figure_id(const std::string& s) {
    for (auto id : {FigureId::fig1a, FigureId::fig1b, FigureId::fig2a, FigureId::fig2b,
                    FigureId::fig3a, FigureId::fig3b, FigureId::fig3c})
        if (to_string(id) == s) return id;
    return std::nullopt;
}

inline std::vector<int> odd_range(int lo, int hi) {
    std::vector<int> out;
    for (int n = lo | 1; n <= hi; n += 2) out.push_back(n);
    return out;
}

struct FigureSpec {
    FigureId id = FigureId::fig1a;
    std::vector<int> n_values;
    double t = 1.25;          // fig1
    double s = 1.0;           // fig2, fig3
    double eps = 0.1;         // fig3
    SignMode sign_mode = SignMode::positive;
    std::uint64_t seed = 7;
    double trunc_tol = 1e-16; // exponential weights
    int fixed_K = 4096;       // polynomial weights in fig3b/fig3c

    static FigureSpec defaults(FigureId id) {
        FigureSpec f;
        f.id = id;
        switch (id) {
        case FigureId::fig1a: f.t = 5.0 / 4.0; f.n_values = odd_range(3, 41); break;
        case FigureId::fig1b: f.t = 50.0 / 49.0; f.n_values = odd_range(3, 41); break;
        case FigureId::fig2a: f.s = 1.0; f.n_values = odd_range(3, 21); break;
        case FigureId::fig2b: f.s = 0.5; f.n_values = odd_range(3, 21); break;
        case FigureId::fig3a: f.s = 0.5; f.n_values = odd_range(3, 21); break;
        case FigureId::fig3b: f.s = 1.0; f.n_values = odd_range(3, 21); break;
        case FigureId::fig3c: f.s = 2.0 / 3.0; f.n_values = odd_range(3, 21); break;
        }
        return f;
    }

    bool is_fig1() const { return id == FigureId::fig1a || id == FigureId::fig1b; }
    bool is_fig2() const { return id == FigureId::fig2a || id == FigureId::fig2b; }
    bool is_fig3() const { return !is_fig1() && !is_fig2(); }
    bool polynomial() const { return id == FigureId::fig3b || id == FigureId::fig3c; }

    SpaceWeight space() const {
        if (is_fig1()) return SpaceWeight::mod_exp2_from_t(t);
        if (polynomial()) return SpaceWeight::poly(s);
        return SpaceWeight::mod_exp(s);
    }

    Axis axis() const {
        if (is_fig1()) return Axis::n;
        if (polynomial()) return Axis::log10_n;
        return Axis::sqrt_n;
    }

    double theory_slope() const {
        const double q = s / std::sqrt(std::numbers::pi);
        const double log10e = std::numbers::log10e;
        if (is_fig1()) return -2.0 * std::log10(t);
        if (is_fig2()) return -std::numbers::sqrt2 * q * log10e;
        if (id == FigureId::fig3a) return -q * log10e;
        return -s + 4.0 / 3.0;
    }

    void validate() const {
        detail::require(!n_values.empty(), ErrorKind::invalid_parameter, "empty n range");
        for (int n : n_values)
            detail::require(n >= 1, ErrorKind::invalid_parameter, "n must be at least 1", n);
        if (is_fig1()) detail::require(t > 1.0, ErrorKind::invalid_parameter, "t must exceed 1");
        else detail::require(s > 0.0, ErrorKind::invalid_parameter, "s must be positive");
        detail::require(trunc_tol > 0.0, ErrorKind::invalid_parameter, "trunc_tol must be positive");
        detail::require(fixed_K >= 1, ErrorKind::invalid_parameter, "K must be positive");
        detail::require(eps >= 0.0, ErrorKind::invalid_parameter, "eps must be nonnegative");
    }
};

/// Worker count: FREUDQ_THREADS if set and positive, else the hardware count.
inline unsigned thread_count() {
    if (const char* env = std::getenv("FREUDQ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs f(i) for i < count on a small pool; results are indexed, so the
/// outcome does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t count, F&& f) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) f(i);
        });
    for (auto& th : pool) th.join();
}

namespace detail {

inline int figure_start(const FigureSpec& spec, int n) {
    return spec.is_fig2() ? 2 * n : n + 1;
}

// Basis deep enough for every row. sup_const only looks at k <= 512, so a
// 512-term probe fixes it before the final size is known.
inline FreudBasis figure_basis(const FigureSpec& spec) {
    const int n_hi = *std::max_element(spec.n_values.begin(), spec.n_values.end());
    int need = n_hi + 2;
    if (spec.is_fig1()) return build_basis(2.0, need);
    FreudBasis probe = build_basis(2.0, std::max(512, need));
    if (spec.polynomial()) {
        need = std::max(need, spec.fixed_K);
    } else {
        for (int n : spec.n_values)
            need = std::max(need, wce_series_index(probe, spec.space(), figure_start(spec, n),
                                                   spec.trunc_tol));
    }
    if (need <= probe.n_max()) return probe;
    return build_basis(2.0, need);
}

inline WCERow figure_row(const FigureSpec& spec, const FreudBasis& basis, int n) {
    WCERow row;
    row.n = n;
    if (spec.is_fig1()) {
        const auto rule = gauss_rule(basis, n);
        const auto r = wce_me2(rule.nodes, rule.omega, spec.t);
        row.wce = r.value;
        row.clamped = r.clamped;
        return row;
    }
    if (spec.is_fig2()) {
        const auto rule = gauss_rule(basis, n);
        row.wce = wce_series(rule.nodes, rule.omega, basis, spec.space(), 2 * n, spec.trunc_tol);
        return row;
    }
    // Gauss nodes X_{n+1}, tau = Lambda_n, shifted, with MZ weights on span{h_0..h_n}.
    const auto rule = gauss_rule(basis, n + 1);
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(n);
    auto moved = perturb_nodes(rule, spec.eps, spec.sign_mode, seed);
    const auto sys = build_system(basis, n, std::move(moved.nodes), std::move(moved.tau));
    const auto omega = generalized_weights(sys, basis);
    if (spec.polynomial())
        row.wce = wce_series_to(sys.nodes, omega, basis, spec.space(), n + 1, spec.fixed_K);
    else
        row.wce = wce_series(sys.nodes, omega, basis, spec.space(), n + 1, spec.trunc_tol);
    return row;
}

} // namespace detail

inline WCETable run_figure(const FigureSpec& spec) {
    spec.validate();
    auto sorted = spec;
    std::sort(sorted.n_values.begin(), sorted.n_values.end());
    sorted.n_values.erase(std::unique(sorted.n_values.begin(), sorted.n_values.end()),
                          sorted.n_values.end());

    WCETable table;
    table.space = sorted.space().name();
    table.axis = sorted.axis();
    table.theory_slope = sorted.theory_slope();
    table.seed = sorted.seed;
    table.params["figure"] = to_string(sorted.id);
    table.params["alpha"] = 2.0;
    table.params["n_values"] = sorted.n_values;
    if (sorted.is_fig1()) {
        table.params["t"] = sorted.t;
    } else {
        table.params["s"] = sorted.s;
        table.params["start"] = std::string(sorted.is_fig2() ? "2n" : "n+1");
        if (sorted.polynomial()) table.params["K"] = std::int64_t(sorted.fixed_K);
        else table.params["trunc_tol"] = sorted.trunc_tol;
    }
    if (sorted.is_fig3()) {
        table.params["eps"] = sorted.eps;
        table.params["sign_mode"] = to_string(sorted.sign_mode);
        table.params["nodes"] = std::string("gauss X_{n+1}, tau = Lambda_n");
    }

    const FreudBasis basis = detail::figure_basis(sorted);
    table.rows.resize(sorted.n_values.size());
    parallel_for(sorted.n_values.size(), [&](std::size_t i) {
        const int n = sorted.n_values[i];
        try {
            table.rows[i] = detail::figure_row(sorted, basis, n);
        } catch (const std::exception& ex) {
            table.rows[i] = WCERow{n, std::nan(""), false, true, ex.what()};
        }
    });
    table.fit();
    return table;
}

} // namespace freudq
