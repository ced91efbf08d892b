#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace ssre {

/// Newey-West long-run variance with a Bartlett kernel,
/// gamma_0 + 2 sum_{l=1}^{L} (1 - l/(L+1)) gamma_l, autocovariances over P.
struct HacEstimate {
    double variance = 0.0;
    bool clamped = false;     // raw estimate was negative and set to 0
    bool degenerate = false;  // variance is exactly 0 (constant or clamped series)
};

HacEstimate hac_variance(std::span<const double> d, std::size_t bandwidth);

/// floor(4 * (P/100)^{2/9}).
std::size_t default_bandwidth(std::size_t p);

/// Standard normal quantile.
double normal_quantile(double prob);

struct DmResult {
    double statistic = 0.0;
    double mean_diff = 0.0;
    double hac_variance = 0.0;
    std::size_t bandwidth = 0;
    std::size_t sample_size = 0;
    double critical_value = 0.0;
    double level = 0.1;
    bool reject = false;
};

/// One-sided test of "Q is not worse than P" on negatively oriented losses:
/// d_t = loss_q - loss_p, statistic sqrt(P)*mean(d)/sqrt(hac), reject when the
/// statistic exceeds the 1-level normal quantile. Throws DegenerateVariance
/// when the HAC variance is 0.
DmResult dm_test(std::span<const double> loss_q, std::span<const double> loss_p, double level,
                 std::optional<std::size_t> bandwidth = std::nullopt);

/// Same test from precomputed differentials.
DmResult dm_test_diffs(std::span<const double> d, double level, std::optional<std::size_t> bandwidth = std::nullopt);

}  // namespace ssre
