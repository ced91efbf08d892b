#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "ssre/eprocess.hpp"

namespace ssre {

enum class BoundaryScheme { TwoSided, Modified };

std::string_view to_string(BoundaryScheme scheme) noexcept;

/// Indifference region (k_l, k_u) for the cumulative score ratio. The log
/// values are the ones compared against; k_l/k_u are kept for reporting.
struct Boundaries {
    double k_l = 1.0;
    double k_u = 1.0;
    double log_k_l = 0.0;
    double log_k_u = 0.0;
    std::optional<double> beta;
    BoundaryScheme scheme = BoundaryScheme::TwoSided;

    static Boundaries from_logs(double log_k_l, double log_k_u, std::optional<double> beta,
                                BoundaryScheme scheme);
};

/// k_l = (beta/(1-beta))^{1/omega}, k_u = ((1-beta)/beta)^{1/omega}; by
/// Ville's inequality both error rates stay below beta/(1-beta).
Boundaries boundaries_from_beta(double beta, OmegaRate omega);

inline constexpr double kPublishedUpperBoundary = 11.11;

/// k_l = 1 and k_u = (1-beta)/beta, or `k_u_override` when given (the
/// published simulation study uses 11.11 at beta = 0.1).
Boundaries modified_boundary(double beta, std::optional<double> k_u_override = std::nullopt);

enum class Decision { SelectQ, SelectP, TruncatedSelectQ, TruncatedSelectP };

std::string_view to_string(Decision d) noexcept;

struct SsreOutcome {
    std::size_t stopping_time = 0;  // 1-based index of the deciding observation
    bool truncated = false;
    bool tie_break = false;  // truncated with C exactly 1
    Decision decision = Decision::SelectQ;
    std::vector<double> path;      // monitored log statistic up to stopping_time
    double crossing_log_value = 0.0;

    bool selects_p() const noexcept {
        return decision == Decision::SelectP || decision == Decision::TruncatedSelectP;
    }
};

/// First exit of log C_n from (log k_l, log k_u): <= log k_l selects Q,
/// >= log k_u selects P. Without an exit by n_max (default: path length) the
/// sign of log C at n_max decides, with ties going to the benchmark Q.
SsreOutcome run_ssre(std::span<const double> log_c_path, const Boundaries& bounds,
                     std::optional<std::size_t> n_max = std::nullopt);

/// Monitor the rate-averaged mean e-variable over the evaluation window and
/// select P at the first prefix where it reaches k_u. Otherwise the
/// benchmark Q is kept at the end of the window (truncated when the final
/// average still exceeds k_l). Only k_u and k_l of `bounds` are used.
SsreOutcome run_mean_evalue_test(std::span<const double> cumulative_delta, std::span<const OmegaRate> rates,
                                 const Boundaries& bounds);

/// log of mean(exp(h * z)).
double empirical_log_mgf(std::span<const double> z, double h);

struct MgfRootOptions {
    /// Sample means within this many standard errors of zero are rejected as
    /// ill-conditioned.
    double min_abs_t = 1.0;
    double initial_step = 1e-3;
};

/// Nonzero root h_P of mean(exp(h*z)) = 1, on the side opposite the sign of
/// mean(z). Throws NoRootError without two-sided support and IllConditioned
/// when the mean is indistinguishable from zero.
double mgf_root(std::span<const double> z, const MgfRootOptions& opts = {});

/// Boundaries that attain preassigned error rates for a known effective
/// tilt h_eff = h_P + eps. h_P and eps are not observable in practice;
/// estimate h_P with mgf_root on pilot data or use modified_boundary.
Boundaries wald_boundaries(double beta_q, double beta_p, double h_eff);

struct ErrorRates {
    double beta_q = 0.0;
    double beta_p = 0.0;
};

ErrorRates error_rates(double k_l, double k_u, double h_eff_q, double h_eff_p);

/// Smallest n with 1 - expected_stop/n >= target_prob (Markov bound on P(N < n)).
std::uint64_t min_sample_size(double expected_stop, double target_prob);

struct StoppingTimeStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;
    std::size_t max = 0;
    double truncation_frequency = 0.0;
    std::array<double, 4> raw_moments{};  // E[N^k], k = 1..4
    /// OLS fit of log P(N > n) on n over the upper 30% of the survival curve
    /// (n at or above the 70th percentile, with at least 5 survivors).
    double tail_slope = 0.0;
    double tail_r2 = 0.0;
    std::size_t tail_points = 0;
};

StoppingTimeStats stopping_time_stats(std::span<const SsreOutcome> outcomes);
StoppingTimeStats stopping_time_stats(std::span<const std::size_t> stopping_times, std::size_t truncated_count);

}  // namespace ssre
