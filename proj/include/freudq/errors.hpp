#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace freudq {

enum class ErrorKind {
    invalid_parameter,
    dimension_mismatch,
    capacity_exceeded,
    gap_violation,
    degenerate_abscissa,
    unsupported_alpha,
    no_convergence,
    eigensolver_failure,
    evaluator_failure,
    unbounded_tail,
    quadrature_no_convergence,
    grid_insufficient,
    not_a_frame,
    solve_failure,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::capacity_exceeded: return "capacity-exceeded";
    case ErrorKind::gap_violation: return "gap-violation";
    case ErrorKind::degenerate_abscissa: return "degenerate-abscissa";
    case ErrorKind::unsupported_alpha: return "unsupported-alpha";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::eigensolver_failure: return "eigensolver-failure";
    case ErrorKind::evaluator_failure: return "evaluator-failure";
    case ErrorKind::unbounded_tail: return "unbounded-tail";
    case ErrorKind::quadrature_no_convergence: return "quadrature-no-convergence";
    case ErrorKind::grid_insufficient: return "grid-insufficient";
    case ErrorKind::not_a_frame: return "not-a-frame";
    case ErrorKind::solve_failure: return "solve-failure";
    }
    return "unknown";
}

// Validation errors are caller mistakes; everything else is a numerical failure.
inline bool is_validation_error(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_parameter:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::capacity_exceeded:
    case ErrorKind::gap_violation:
    case ErrorKind::degenerate_abscissa:
    case ErrorKind::unsupported_alpha:
        return true;
    default:
        return false;
    }
}

/// Exception carrying a machine-readable kind and, where meaningful, the
/// offending index (recurrence index, node index, required truncation, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          std::optional<std::int64_t> index = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind), index_(index) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::int64_t> index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::optional<std::int64_t> index_;
};

namespace detail {

inline void require(bool cond, ErrorKind kind, const std::string& what,
                    std::optional<std::int64_t> index = std::nullopt) {
    if (!cond) throw Error(kind, what, index);
}

} // namespace detail
} // namespace freudq
