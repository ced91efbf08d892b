#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssre/scoring.hpp"

namespace ssre {

/// Learning rate omega > 0 applied to the cumulative score differential.
class OmegaRate {
public:
    explicit OmegaRate(double value);
    double value() const noexcept { return value_; }
    friend bool operator==(OmegaRate, OmegaRate) = default;

private:
    double value_;
};

/// {1/4, 1/2, 1}.
std::vector<OmegaRate> default_rates();

/// C_n = exp(Delta_n). `log_c` is authoritative; `c` saturates at +inf and
/// raises `overflowed` when exp(Delta_n) is not representable.
struct CumulativeRatio {
    std::vector<double> log_c;
    std::vector<double> c;
    bool overflowed = false;
};

CumulativeRatio cumulative_ratio(const ScoreDiffSeries& series);

/// exp(omega*delta). omega may be 0 (returns exactly 1).
double e_stat(double omega, double delta);
inline double log_e_stat(double omega, double delta) { return omega == 0.0 ? 0.0 : omega * delta; }

/// Sort ascending and scale the j-th smallest by j/N. Throws InvalidEValue
/// on negative or NaN input.
std::vector<double> ordered_scaled_evalues(std::span<const double> e);

/// log of (1/N) sum_j (j/N) e_(j) with e_j = exp(omega * delta[j]).
double log_mean_evalue(OmegaRate omega, std::span<const double> delta);
double mean_evalue(OmegaRate omega, std::span<const double> delta);

double avg_over_rates(std::span<const double> per_rate_means);
double log_avg_over_rates(std::span<const double> per_rate_log_means);

/// Fold of a cumulative-differential path into per-rate e-statistics and the
/// prefix-wise averaged e-variables. Index j refers to the prefix Delta_1..Delta_{j+1};
/// ordering is recomputed within every prefix.
struct EProcessState {
    std::vector<OmegaRate> omega_rates;
    std::vector<std::vector<double>> log_e;          // [rate][j] = omega * Delta_j
    std::vector<std::vector<double>> log_mean_path;  // [rate][j] = log Ebar_{j+1}
    std::vector<double> log_avg_path;                // [j] = log mean over rates
};

EProcessState build_eprocess(std::span<const double> cumulative_delta, std::span<const OmegaRate> rates);

enum class ScreenVerdict { Similar, Dissimilar, Inconclusive };

std::string_view to_string(ScreenVerdict verdict) noexcept;

/// Trajectories of -omega*sign(Delta_R)*Delta_t across an in-sample path, for
/// checking that the candidate rates tell the same story.
struct ScreenReport {
    std::vector<OmegaRate> omega_rates;
    std::vector<std::vector<double>> log_stats;  // [rate][t]
    ScreenVerdict verdict = ScreenVerdict::Inconclusive;
    double min_correlation = 0.0;
    bool signs_agree = false;
    double correlation_threshold = 0.9;

    /// Columns t,rate,log_stat with t starting at 1.
    std::string to_csv() const;
};

ScreenReport omega_screen(std::span<const double> in_sample_delta_path, std::span<const OmegaRate> rates,
                          double correlation_threshold = 0.9);

}  // namespace ssre
