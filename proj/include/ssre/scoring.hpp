#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace ssre {

/// One-step-ahead Gaussian predictive N(mean, variance).
struct GaussianPredictive {
    double mean = 0.0;
    double variance = 1.0;

    /// Throws InvalidPredictive unless mean is finite and variance is
    /// finite and strictly positive.
    void validate() const;
};

enum class ScoreKind { LogScore, Mse };

std::string_view to_string(ScoreKind kind) noexcept;
ScoreKind score_kind_from_string(std::string_view text);

// All scores are negatively oriented: smaller is better.

/// Negative log predictive density, 0.5*log(2*pi*var) + (y - mean)^2 / (2*var).
double log_score(const GaussianPredictive& pred, double y);

double squared_error_score(double point, double y) noexcept;

/// Log score or squared error of the predictive mean, by kind.
double score(ScoreKind kind, const GaussianPredictive& pred, double y);

/// Per-period differentials D_m = S_Q - S_P and their running sum.
/// `cumsum` is the log of the cumulative score ratio C_n(Q, P).
struct ScoreDiffSeries {
    std::vector<double> diffs;
    std::vector<double> cumsum;

    std::size_t size() const noexcept { return diffs.size(); }

    static ScoreDiffSeries from_diffs(std::vector<double> diffs);
};

/// Throws ShapeError on empty or mismatched inputs.
ScoreDiffSeries score_diff_series(std::span<const double> scores_q,
                                  std::span<const double> scores_p);

}  // namespace ssre
