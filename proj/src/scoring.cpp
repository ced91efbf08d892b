#include "ssre/scoring.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ssre/error.hpp"

namespace ssre {

void GaussianPredictive::validate() const {
    if (!std::isfinite(mean)) {
        throw Error(ErrorKind::InvalidPredictive, "predictive mean is not finite");
    }
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw Error(ErrorKind::InvalidPredictive,
                    "predictive variance must be finite and > 0, got " + std::to_string(variance));
    }
}

std::string_view to_string(ScoreKind kind) noexcept {
    return kind == ScoreKind::LogScore ? "log" : "mse";
}

ScoreKind score_kind_from_string(std::string_view text) {
    if (text == "log" || text == "LogScore" || text == "logscore") return ScoreKind::LogScore;
    if (text == "mse" || text == "Mse" || text == "MSE") return ScoreKind::Mse;
    throw Error(ErrorKind::InvalidConfig, "unknown score '" + std::string(text) + "'");
}

double log_score(const GaussianPredictive& pred, double y) {
    pred.validate();
    const double err = y - pred.mean;
    return 0.5 * std::log(2.0 * std::numbers::pi * pred.variance) +
           err * err / (2.0 * pred.variance);
}

double squared_error_score(double point, double y) noexcept {
    const double err = y - point;
    return err * err;
}

double score(ScoreKind kind, const GaussianPredictive& pred, double y) {
    if (kind == ScoreKind::LogScore) return log_score(pred, y);
    return squared_error_score(pred.mean, y);
}

ScoreDiffSeries ScoreDiffSeries::from_diffs(std::vector<double> diffs) {
    if (diffs.empty()) throw Error(ErrorKind::ShapeError, "score differential series is empty");
    ScoreDiffSeries out;
    out.cumsum.resize(diffs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        acc += diffs[i];
        out.cumsum[i] = acc;
    }
    out.diffs = std::move(diffs);
    return out;
}

ScoreDiffSeries score_diff_series(std::span<const double> scores_q,
                                  std::span<const double> scores_p) {
    if (scores_q.size() != scores_p.size()) {
        throw Error(ErrorKind::ShapeError, "score sequences differ in length (" +
                                               std::to_string(scores_q.size()) + " vs " +
                                               std::to_string(scores_p.size()) + ")");
    }
    std::vector<double> diffs(scores_q.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = scores_q[i] - scores_p[i];
    return ScoreDiffSeries::from_diffs(std::move(diffs));
}

}  // namespace ssre
