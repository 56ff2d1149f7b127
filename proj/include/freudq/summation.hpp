#pragma once

/* Error-free transformations and compensated accumulation.  */

#include <cmath>
#include <span>

namespace freudq {

struct TwoTerm {
    double hi;
    double lo;
};

// Knuth's TwoSum: hi + lo == a + b exactly.
inline TwoTerm two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline TwoTerm two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

/// Running sum with a separately accumulated error term (Neumaier-style
/// cascade via TwoSum). Deterministic for a fixed summation order.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double init) : sum_(init) {}

    void add(double x) {
        TwoTerm t = two_sum(sum_, x);
        sum_ = t.hi;
        err_ += t.lo;
    }

    // a*b with the rounding error of the product folded in.
    void add_product(double a, double b) {
        TwoTerm p = two_prod(a, b);
        add(p.hi);
        err_ += p.lo;
    }

    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return sum_ + err_; }

private:
    double sum_ = 0.0;
    double err_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline double compensated_dot(std::span<const double> a, std::span<const double> b) {
    CompensatedSum s;
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < n; ++i) s.add_product(a[i], b[i]);
    return s.value();
}

} // namespace freudq
