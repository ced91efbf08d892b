#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace ssre {

/// log(sum_i exp(x_i)); -inf for an empty input.
inline double log_sum_exp(std::span<const double> x) noexcept {
    if (x.empty()) return -std::numeric_limits<double>::infinity();
    const double hi = *std::max_element(x.begin(), x.end());
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (double v : x) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

/// exp(x) with overflow reported instead of silently returning +inf.
inline double exp_checked(double x, bool& overflowed) noexcept {
    constexpr double kMaxLog = 709.78;  // log(DBL_MAX)
    if (x > kMaxLog) {
        overflowed = true;
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(x);
}

}  // namespace ssre
