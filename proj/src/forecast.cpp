#include <algorithm>

#include "ssre/tsmodels.hpp"

namespace ssre {

namespace {

std::size_t lag_depth(const MethodKind& kind) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, RandomWalkDrift>) return 1;
            else if constexpr (std::is_same_v<T, ArModel>) return m.coeffs.size();
            else if constexpr (std::is_same_v<T, Arma21Model>) return 2;
            else return 0;
        },
        kind);
}

}  // namespace

OneStepForecaster::OneStepForecaster(FittedMethod method)
    : method_(std::move(method)), lags_(lag_depth(method_.kind), 0.0) {}

std::size_t OneStepForecaster::min_history() const noexcept { return lags_.size(); }

GaussianPredictive OneStepForecaster::predict(const RegressorRow& next) const {
    if (observed_ < min_history()) {
        throw Error(ErrorKind::InsufficientData, method_.name() + " needs " + std::to_string(min_history()) +
                                                     " past observations");
    }
    const double mean = std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, RandomWalkDrift>) {
                return m.mu + lags_[0];
            } else if constexpr (std::is_same_v<T, ArModel>) {
                double acc = m.intercept;
                for (std::size_t i = 0; i < m.coeffs.size(); ++i) acc += m.coeffs[i] * lags_[i];
                return acc;
            } else if constexpr (std::is_same_v<T, Arma21Model>) {
                return m.intercept + m.rho1 * lags_[0] + m.rho2 * lags_[1] + m.theta * innovation_;
            } else if constexpr (std::is_same_v<T, ComboEqual>) {
                return 0.5 * (m.beta1[0] + m.beta1[1] * next.x1) + 0.5 * (m.beta2[0] + m.beta2[1] * next.x2);
            } else {
                return m.weight_hat * (m.beta1[0] + m.beta1[1] * next.x1) +
                       (1.0 - m.weight_hat) * (m.beta2[0] + m.beta2[1] * next.x2);
            }
        },
        method_.kind);
    GaussianPredictive pred{mean, method_.sigma2()};
    pred.validate();
    return pred;
}

void OneStepForecaster::observe(double y) {
    if (const auto* arma = std::get_if<Arma21Model>(&method_.kind)) {
        innovation_ = observed_ >= 2 ? y - (arma->intercept + arma->rho1 * lags_[0] + arma->rho2 * lags_[1] +
                                            arma->theta * innovation_)
                                     : 0.0;
    }
    if (!lags_.empty()) {
        std::rotate(lags_.rbegin(), lags_.rbegin() + 1, lags_.rend());
        lags_[0] = y;
    }
    ++observed_;
}

GaussianPredictive forecast_one_step(const FittedMethod& method, std::span<const double> history,
                                     const RegressorRow& next) {
    OneStepForecaster forecaster(method);
    for (double y : history) forecaster.observe(y);
    return forecaster.predict(next);
}

}  // namespace ssre
