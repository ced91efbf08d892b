#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ssre/error.hpp"
#include "ssre/scoring.hpp"

namespace ssre {

// ---------------------------------------------------------------------------
// Data-generating processes
// ---------------------------------------------------------------------------

/// Y_t = rho*Y_{t-1} + sigma*eps_t. |rho| < 1 starts from the stationary
/// regime after a burn-in; otherwise Y_1 = sigma*eps_1.
struct Ar1Dgp {
    double rho = 1.0;
    double sigma = 2.0;
};

/// Y_t = rho1*Y_{t-1} + rho2*Y_{t-2} + sigma*(eps_t + theta*eps_{t-1}).
struct Arma21Dgp {
    double rho1 = 1.4;
    double rho2 = -0.6;
    double theta = 0.285;
    double sigma = 2.0;
};

/// Y_t = w*X1_t + (1-w)*X2_t + sigma*eta_t with two MA(2) leading indicators
///   X1_t = e_t + 0.50 e_{t-1} + 0.285 e_{t-2},
///   X2_t = v_t + 0.50 v_{t-1} - 0.570 v_{t-2}.
struct ComboDgp {
    double combo_weight = 0.5;
    double sigma = 2.0;
};

using DgpKind = std::variant<Ar1Dgp, Arma21Dgp, ComboDgp>;

struct DgpSpec {
    DgpKind kind = Ar1Dgp{};
    std::size_t length = 1000;
    std::uint64_t seed = 0;

    void validate() const;
};

inline constexpr std::size_t kBurnIn = 500;
inline constexpr std::array<double, 2> kIndicator1Ma = {0.50, 0.285};
inline constexpr std::array<double, 2> kIndicator2Ma = {0.50, -2.0 * 0.285};

struct SimulatedSeries {
    std::vector<double> y;
    std::vector<double> x1;  // empty unless the DGP is ComboDgp
    std::vector<double> x2;
};

/// Deterministic in (spec, seed).
SimulatedSeries simulate(const DgpSpec& spec);

// ---------------------------------------------------------------------------
// Fitted forecasting methods
// ---------------------------------------------------------------------------

/// Half-open index range [begin, end) into a series.
struct Window {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
    static Window all(std::size_t n) noexcept { return {0, n}; }
};

/// Y_t | Y_{t-1} ~ N(mu + Y_{t-1}, sigma2).
struct RandomWalkDrift {
    double mu = 0.0;
    double sigma2 = 1.0;
};

/// Y_t | past ~ N(intercept + sum_i coeffs[i]*Y_{t-1-i}, sigma2).
struct ArModel {
    double intercept = 0.0;
    std::vector<double> coeffs;
    double sigma2 = 1.0;
};

/// Conditional-sum-of-squares ARMA(2,1) with intercept; the predictive
/// feeds back the filtered innovation.
struct Arma21Model {
    double intercept = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
    double theta = 0.0;
    double sigma2 = 1.0;
};

/// beta = (intercept, slope) of a univariate regression of y on one indicator.
using RegressionCoeffs = std::array<double, 2>;

struct ComboEqual {
    RegressionCoeffs beta1{};
    RegressionCoeffs beta2{};
    double sigma2 = 1.0;
};

struct ComboOptimal {
    RegressionCoeffs beta1{};
    RegressionCoeffs beta2{};
    double weight_hat = 0.5;
    double sigma2 = 1.0;
    bool degenerate = false;
};

using MethodKind = std::variant<RandomWalkDrift, ArModel, Arma21Model, ComboEqual, ComboOptimal>;

struct FittedMethod {
    MethodKind kind;
    Window fit_window;

    std::string name() const;
    double sigma2() const;
};

class FitDidNotConvergeError : public Error {
public:
    FitDidNotConvergeError(const std::string& what, FittedMethod best)
        : Error(ErrorKind::FitDidNotConverge, what), best_(std::move(best)) {}

    const FittedMethod& best_iterate() const noexcept { return best_; }

private:
    FittedMethod best_;
};

/// Mean and (n-1)-variance of first differences inside the window.
FittedMethod fit_random_walk_drift(std::span<const double> y, Window window);

struct ArFitOptions {
    /// Shrink the AR polynomial back inside the unit circle when the least
    /// squares solution is explosive, then re-estimate the intercept.
    bool enforce_stationarity = false;
};

/// Conditional least squares AR(p) with intercept; sigma2 = SSE / n_eff.
FittedMethod fit_ar(std::size_t order, std::span<const double> y, Window window,
                    const ArFitOptions& opts = {});

struct CssOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-10;
    double stationarity_margin = 1e-4;
};

/// CSS loss sum(e_t^2) for ARMA(2,1) with zero presample innovation, and its
/// exact gradient and Hessian in (intercept, rho1, rho2, theta).
struct CssObjective {
    double loss = 0.0;
    std::size_t n_eff = 0;
    Eigen::Vector4d gradient = Eigen::Vector4d::Zero();
    Eigen::Matrix4d hessian = Eigen::Matrix4d::Zero();
};

CssObjective css_objective(std::span<const double> y, Window window, const Eigen::Vector4d& params);

bool arma21_admissible(double rho1, double rho2, double theta, double margin = 0.0) noexcept;

FittedMethod fit_arma21_css(std::span<const double> y, Window window, const CssOptions& opts = {});

enum class ComboMode { Equal, Optimal };

struct CombinationWeight {
    double weight = 0.5;
    bool degenerate = false;
};

/// Weight on f1 in w*f1 + (1-w)*f2. Equal gives 1/2; Optimal minimizes the
/// in-sample squared error over w in [0, 1]. f1 == f2 yields 1/2, flagged.
CombinationWeight fit_combo(std::span<const double> y, std::span<const double> f1,
                            std::span<const double> f2, ComboMode mode);

/// Regress y on each indicator separately, then weight the two fitted values.
FittedMethod fit_combination(std::span<const double> y, std::span<const double> x1,
                             std::span<const double> x2, Window window, ComboMode mode);

/// Contemporaneous indicator values available for the period being forecast.
struct RegressorRow {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Incremental one-step forecaster: alternate predict() and observe(y).
/// ARMA innovations are filtered from the first observed value onward, with
/// the presample innovation set to zero.
class OneStepForecaster {
public:
    explicit OneStepForecaster(FittedMethod method);

    /// Observations needed before predict() is defined.
    std::size_t min_history() const noexcept;
    std::size_t observed() const noexcept { return observed_; }

    GaussianPredictive predict(const RegressorRow& next = {}) const;
    void observe(double y);

    const FittedMethod& method() const noexcept { return method_; }

private:
    FittedMethod method_;
    std::vector<double> lags_;  // most recent first
    double innovation_ = 0.0;
    std::size_t observed_ = 0;
};

/// Forecast of the period following `history`, filtering from history[0].
GaussianPredictive forecast_one_step(const FittedMethod& method, std::span<const double> history,
                                     const RegressorRow& next = {});

// ---------------------------------------------------------------------------
// Recursive Newton-Raphson
// ---------------------------------------------------------------------------

/// theta_{n+1} = theta_n - (H_{n+1} + ridge*I)^{-1} grad, with
/// H_{n+1} = lambda*H_n + hess_term. `hessian` holds the un-ridged
/// accumulation; `ridge` is what the last solve needed.
struct NewtonState {
    Eigen::VectorXd theta;
    Eigen::MatrixXd hessian;
    double lambda = 1.0;
    double ridge = 0.0;
};

/// Solve (H + ridge*I) x = rhs with the smallest ridge in {0, 1e-8, 2e-8, ...}
/// that makes the matrix positive definite.
Eigen::VectorXd solve_ridged(const Eigen::MatrixXd& h, const Eigen::VectorXd& rhs, double& ridge);

NewtonState recursive_newton_update(const NewtonState& state, const Eigen::VectorXd& grad,
                                    const Eigen::MatrixXd& hess_term);

}  // namespace ssre
