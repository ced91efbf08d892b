#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ssre/tsmodels.hpp"

namespace ssre {

namespace {

void require_window(std::span<const double> y, Window window, std::size_t min_len, const char* what) {
    if (window.end > y.size() || window.begin > window.end) {
        throw Error(ErrorKind::ShapeError, std::string(what) + ": window outside the series");
    }
    if (window.size() < min_len) {
        throw Error(ErrorKind::InsufficientData, std::string(what) + ": window of " +
                                                     std::to_string(window.size()) + " needs at least " +
                                                     std::to_string(min_len) + " observations");
    }
}

// sigma2 at or below this fraction of the data's mean square is an exact fit.
void require_positive_variance(double sigma2, double scale, const char* what) {
    if (!(sigma2 > 1e-20 * std::max(1.0, scale)) || !std::isfinite(sigma2)) {
        throw Error(ErrorKind::DegenerateVariance, std::string(what) + ": residual variance is zero");
    }
}

double mean_square(std::span<const double> y, Window w) {
    double acc = 0.0;
    for (std::size_t t = w.begin; t < w.end; ++t) acc += y[t] * y[t];
    return acc / static_cast<double>(w.size());
}

bool window_is_constant(std::span<const double> y, Window w) {
    return std::all_of(y.begin() + w.begin, y.begin() + w.end, [&](double v) { return v == y[w.begin]; });
}

// Largest modulus among the inverse roots of 1 - sum_i phi_i z^i.
double max_inverse_root(const std::vector<double>& phi) {
    const auto p = static_cast<Eigen::Index>(phi.size());
    if (p == 0) return 0.0;
    if (p == 1) return std::abs(phi[0]);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = phi[i];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
}

RegressionCoeffs simple_regression(std::span<const double> y, std::span<const double> x, Window w) {
    const double n = static_cast<double>(w.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t t = w.begin; t < w.end; ++t) {
        mx += x[t];
        my += y[t];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = w.begin; t < w.end; ++t) {
        sxx += (x[t] - mx) * (x[t] - mx);
        sxy += (x[t] - mx) * (y[t] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorKind::SingularFit, "indicator is constant over the fit window");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

}  // namespace

std::string FittedMethod::name() const {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, RandomWalkDrift>) return "random_walk_drift";
            else if constexpr (std::is_same_v<T, ArModel>) return "ar(" + std::to_string(m.coeffs.size()) + ")";
            else if constexpr (std::is_same_v<T, Arma21Model>) return "arma(2,1)";
            else if constexpr (std::is_same_v<T, ComboEqual>) return "combo_equal";
            else return "combo_optimal";
        },
        kind);
}

double FittedMethod::sigma2() const {
    return std::visit([](const auto& m) { return m.sigma2; }, kind);
}

FittedMethod fit_random_walk_drift(std::span<const double> y, Window window) {
    require_window(y, window, 3, "random walk fit");
    const std::size_t n = window.size() - 1;
    double mu = 0.0;
    for (std::size_t t = window.begin + 1; t < window.end; ++t) mu += y[t] - y[t - 1];
    mu /= static_cast<double>(n);
    double ss = 0.0, scale = 0.0;
    for (std::size_t t = window.begin + 1; t < window.end; ++t) {
        const double d = y[t] - y[t - 1];
        ss += (d - mu) * (d - mu);
        scale += d * d;
    }
    const double sigma2 = ss / static_cast<double>(n - 1);
    require_positive_variance(sigma2, scale / static_cast<double>(n), "random walk fit");
    return {RandomWalkDrift{mu, sigma2}, window};
}

FittedMethod fit_ar(std::size_t order, std::span<const double> y, Window window, const ArFitOptions& opts) {
    if (order == 0) throw Error(ErrorKind::InvalidConfig, "AR order must be >= 1");
    require_window(y, window, order + 3, "AR fit");
    if (window_is_constant(y, window)) throw Error(ErrorKind::SingularFit, "AR fit: series is constant");

    const auto n_eff = static_cast<Eigen::Index>(window.size() - order);
    const auto p = static_cast<Eigen::Index>(order);
    Eigen::MatrixXd design(n_eff, p + 1);
    Eigen::VectorXd target(n_eff);
    for (Eigen::Index r = 0; r < n_eff; ++r) {
        const std::size_t t = window.begin + order + static_cast<std::size_t>(r);
        design(r, 0) = 1.0;
        for (Eigen::Index i = 0; i < p; ++i) design(r, i + 1) = y[t - 1 - static_cast<std::size_t>(i)];
        target(r) = y[t];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-12);
    if (qr.rank() < p + 1) throw Error(ErrorKind::SingularFit, "AR fit: design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(target);

    ArModel model;
    model.intercept = beta(0);
    model.coeffs.assign(beta.data() + 1, beta.data() + beta.size());

    if (opts.enforce_stationarity) {
        constexpr double kMaxModulus = 1.0 - 1e-4;
        const double r = max_inverse_root(model.coeffs);
        if (r >= kMaxModulus) {
            const double shrink = kMaxModulus / r;
            double factor = 1.0;
            for (double& c : model.coeffs) {
                factor *= shrink;
                c *= factor;
            }
            const Eigen::VectorXd slopes = Eigen::Map<const Eigen::VectorXd>(model.coeffs.data(), p);
            model.intercept = (target - design.rightCols(p) * slopes).mean();
        }
    }

    Eigen::VectorXd coeffs(p + 1);
    coeffs(0) = model.intercept;
    for (Eigen::Index i = 0; i < p; ++i) coeffs(i + 1) = model.coeffs[static_cast<std::size_t>(i)];
    const double sse = (target - design * coeffs).squaredNorm();
    model.sigma2 = sse / static_cast<double>(n_eff);
    require_positive_variance(model.sigma2, mean_square(y, window), "AR fit");
    return {std::move(model), window};
}

bool arma21_admissible(double rho1, double rho2, double theta, double margin) noexcept {
    const double lim = 1.0 - margin;
    return rho1 + rho2 < lim && rho2 - rho1 < lim && std::abs(rho2) < lim && std::abs(theta) < lim;
}

CssObjective css_objective(std::span<const double> y, Window window, const Eigen::Vector4d& params) {
    require_window(y, window, 3, "CSS objective");
    const double c = params(0), rho1 = params(1), rho2 = params(2), theta = params(3);
    CssObjective out;
    double e_prev = 0.0;
    Eigen::Vector4d de_prev = Eigen::Vector4d::Zero();
    Eigen::Matrix4d d2e_prev = Eigen::Matrix4d::Zero();
    for (std::size_t t = window.begin + 2; t < window.end; ++t) {
        const double e = y[t] - c - rho1 * y[t - 1] - rho2 * y[t - 2] - theta * e_prev;
        const Eigen::Vector4d x(1.0, y[t - 1], y[t - 2], e_prev);
        const Eigen::Vector4d de = -x - theta * de_prev;
        Eigen::Matrix4d d2e = -theta * d2e_prev;
        d2e.row(3) -= de_prev.transpose();
        d2e.col(3) -= de_prev;
        out.loss += e * e;
        out.gradient += 2.0 * e * de;
        out.hessian += 2.0 * (de * de.transpose() + e * d2e);
        e_prev = e;
        de_prev = de;
        d2e_prev = d2e;
    }
    out.n_eff = window.size() - 2;
    return out;
}

namespace {

// Hannan-Rissanen: long autoregression for innovations, then OLS on
// (1, y_{t-1}, y_{t-2}, e_{t-1}).
Eigen::Vector4d hannan_rissanen_start(std::span<const double> y, Window window) {
    const std::size_t long_order = std::clamp<std::size_t>(window.size() / 20, 2, 10);
    Eigen::Vector4d start(0.0, 0.0, 0.0, 0.0);
    try {
        const auto long_ar = std::get<ArModel>(fit_ar(long_order, y, window).kind);
        std::vector<double> resid(window.size(), 0.0);
        for (std::size_t t = window.begin + long_order; t < window.end; ++t) {
            double pred = long_ar.intercept;
            for (std::size_t i = 0; i < long_order; ++i) pred += long_ar.coeffs[i] * y[t - 1 - i];
            resid[t - window.begin] = y[t] - pred;
        }
        const std::size_t first = window.begin + long_order + 1;
        const auto rows = static_cast<Eigen::Index>(window.end - first);
        Eigen::MatrixXd design(rows, 4);
        Eigen::VectorXd target(rows);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const std::size_t t = first + static_cast<std::size_t>(r);
            design.row(r) << 1.0, y[t - 1], y[t - 2], resid[t - 1 - window.begin];
            target(r) = y[t];
        }
        start = design.colPivHouseholderQr().solve(target);
    } catch (const Error&) {
        // fall through to the AR(2) start below
    }
    if (!start.allFinite() || !arma21_admissible(start(1), start(2), start(3), 0.05)) {
        const auto ar2 = std::get<ArModel>(fit_ar(2, y, window, {.enforce_stationarity = true}).kind);
        start << ar2.intercept, ar2.coeffs[0], ar2.coeffs[1], 0.0;
        if (!arma21_admissible(start(1), start(2), 0.0, 0.05)) start << start(0), 0.0, 0.0, 0.0;
    }
    return start;
}

FittedMethod make_arma(const Eigen::Vector4d& psi, double loss, std::size_t n_eff, Window window) {
    return {Arma21Model{psi(0), psi(1), psi(2), psi(3), loss / static_cast<double>(n_eff)}, window};
}

}  // namespace

FittedMethod fit_arma21_css(std::span<const double> y, Window window, const CssOptions& opts) {
    require_window(y, window, 50, "ARMA(2,1) fit");
    if (window_is_constant(y, window)) throw Error(ErrorKind::SingularFit, "ARMA(2,1) fit: series is constant");

    Eigen::Vector4d psi = hannan_rissanen_start(y, window);
    CssObjective obj = css_objective(y, window, psi);
    bool converged = false;
    for (int iter = 0; iter < opts.max_iterations && !converged; ++iter) {
        double ridge = 0.0;
        const Eigen::Vector4d step =
            solve_ridged(obj.hessian, obj.gradient, ridge);  // H^{-1} g, ridged until PD
        const double psi_scale = 1.0 + psi.cwiseAbs().maxCoeff();
        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-12; alpha *= 0.5) {
            const Eigen::Vector4d trial = psi - alpha * step;
            if (!arma21_admissible(trial(1), trial(2), trial(3), opts.stationarity_margin)) continue;
            CssObjective trial_obj = css_objective(y, window, trial);
            if (trial_obj.loss <= obj.loss) {
                converged = (alpha * step).cwiseAbs().maxCoeff() < opts.step_tolerance * psi_scale;
                psi = trial;
                obj = std::move(trial_obj);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No admissible descent along the Newton direction: the iterate is
            // a minimum to working precision if the step itself is negligible.
            converged = step.cwiseAbs().maxCoeff() < 1e-6 * psi_scale;
            break;
        }
    }
    FittedMethod fitted = make_arma(psi, obj.loss, obj.n_eff, window);
    if (!converged) {
        throw FitDidNotConvergeError("ARMA(2,1) CSS did not converge", std::move(fitted));
    }
    require_positive_variance(fitted.sigma2(), mean_square(y, window), "ARMA(2,1) fit");
    return fitted;
}

CombinationWeight fit_combo(std::span<const double> y, std::span<const double> f1,
                            std::span<const double> f2, ComboMode mode) {
    if (y.size() != f1.size() || y.size() != f2.size()) {
        throw Error(ErrorKind::ShapeError, "combination inputs are not aligned");
    }
    if (y.size() < 3) throw Error(ErrorKind::InsufficientData, "combination needs at least 3 points");
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double spread = f1[t] - f2[t];
        num += (y[t] - f2[t]) * spread;
        den += spread * spread;
    }
    if (!(den > 0.0)) return {0.5, true};
    if (mode == ComboMode::Equal) return {0.5, false};
    return {std::clamp(num / den, 0.0, 1.0), false};
}

FittedMethod fit_combination(std::span<const double> y, std::span<const double> x1,
                             std::span<const double> x2, Window window, ComboMode mode) {
    if (x1.size() != y.size() || x2.size() != y.size()) {
        throw Error(ErrorKind::ShapeError, "indicators are not aligned with the target series");
    }
    require_window(y, window, 3, "combination fit");
    const RegressionCoeffs beta1 = simple_regression(y, x1, window);
    const RegressionCoeffs beta2 = simple_regression(y, x2, window);
    std::vector<double> yw(window.size()), f1(window.size()), f2(window.size());
    for (std::size_t i = 0; i < window.size(); ++i) {
        const std::size_t t = window.begin + i;
        yw[i] = y[t];
        f1[i] = beta1[0] + beta1[1] * x1[t];
        f2[i] = beta2[0] + beta2[1] * x2[t];
    }
    const CombinationWeight w = fit_combo(yw, f1, f2, mode);
    double sse = 0.0;
    for (std::size_t i = 0; i < yw.size(); ++i) {
        const double e = yw[i] - w.weight * f1[i] - (1.0 - w.weight) * f2[i];
        sse += e * e;
    }
    const double sigma2 = sse / static_cast<double>(yw.size());
    require_positive_variance(sigma2, mean_square(y, window), "combination fit");
    if (mode == ComboMode::Equal) return {ComboEqual{beta1, beta2, sigma2}, window};
    return {ComboOptimal{beta1, beta2, w.weight, sigma2, w.degenerate}, window};
}

}  // namespace ssre
