#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ssre/error.hpp"
#include "ssre/rng.hpp"
#include "ssre/tsmodels.hpp"

using namespace ssre;
using doctest::Approx;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an ssre::Error");
    return ErrorKind::NumericalError;
}

std::vector<double> sim_y(DgpKind kind, std::size_t n, std::uint64_t seed) {
    return simulate(DgpSpec{kind, n, seed}).y;
}

// Brute-force CSS residual for one parameter point.
double css_loss_direct(const std::vector<double>& y, double c, double r1, double r2, double th) {
    double e_prev = 0.0, loss = 0.0;
    for (std::size_t t = 2; t < y.size(); ++t) {
        const double e = y[t] - c - r1 * y[t - 1] - r2 * y[t - 2] - th * e_prev;
        loss += e * e;
        e_prev = e;
    }
    return loss;
}

}  // namespace

TEST_CASE("simulation is deterministic in (spec, seed)") {
    for (DgpKind k : {DgpKind{Ar1Dgp{1.0, 2.0}}, DgpKind{Arma21Dgp{}}, DgpKind{ComboDgp{0.25, 2.0}}}) {
        const auto a = simulate({k, 300, 42});
        const auto b = simulate({k, 300, 42});
        const auto c = simulate({k, 300, 43});
        CHECK(a.y == b.y);
        CHECK(a.x1 == b.x1);
        CHECK(a.y != c.y);
        CHECK(a.y.size() == 300);
    }
}

TEST_CASE("simulation validates the spec") {
    CHECK(kind_of([] { simulate({Ar1Dgp{0.5, 0.0}, 100, 1}); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { simulate({Ar1Dgp{0.5, 1.0}, 9, 1}); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { simulate({ComboDgp{1.5, 1.0}, 100, 1}); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("unit-root path starts at sigma times the first shock") {
    const auto y = sim_y(Ar1Dgp{1.0, 2.0}, 50, 9);
    CounterRng rng(9);
    CHECK(y[0] == Approx(2.0 * rng.normal()).epsilon(1e-15));
}

TEST_CASE("stationary AR(1) variance") {
    const auto y = sim_y(Ar1Dgp{0.9, 2.0}, 200000, 3);
    const double target = 4.0 / (1.0 - 0.81);
    CHECK(std::abs(oracle::sample_variance(y) / target - 1.0) < 0.03);
}

TEST_CASE("leading indicators have the stated MA structure") {
    CHECK(kIndicator2Ma[1] == -0.57);
    const auto s = simulate({ComboDgp{0.5, 1.0}, 100000, 8});
    const auto lag_corr = [](const std::vector<double>& x, std::size_t lag) {
        const double m = oracle::mean(x);
        double num = 0.0, den = 0.0;
        for (std::size_t t = 0; t < x.size(); ++t) {
            den += (x[t] - m) * (x[t] - m);
            if (t >= lag) num += (x[t] - m) * (x[t - lag] - m);
        }
        return num / den;
    };
    const double v1 = 1.0 + 0.25 + 0.285 * 0.285, v2 = 1.0 + 0.25 + 0.57 * 0.57;
    CHECK(lag_corr(s.x1, 2) == Approx(0.285 / v1).epsilon(0.05));
    CHECK(lag_corr(s.x2, 2) == Approx(-0.57 / v2).epsilon(0.05));
    CHECK(lag_corr(s.x2, 1) == Approx((0.5 - 0.5 * 0.57) / v2).epsilon(0.1));
    CHECK(std::abs(lag_corr(s.x1, 3)) < 0.02);
}

TEST_CASE("combination DGP regression recovers the weights") {
    const auto s = simulate({ComboDgp{0.5, 1.0}, 100000, 21});
    // Two-regressor OLS with intercept via centered normal equations.
    const double my = oracle::mean(s.y), m1 = oracle::mean(s.x1), m2 = oracle::mean(s.x2);
    double s11 = 0, s22 = 0, s12 = 0, s1y = 0, s2y = 0;
    for (std::size_t t = 0; t < s.y.size(); ++t) {
        const double a = s.x1[t] - m1, b = s.x2[t] - m2, c = s.y[t] - my;
        s11 += a * a, s22 += b * b, s12 += a * b, s1y += a * c, s2y += b * c;
    }
    const double det = s11 * s22 - s12 * s12;
    CHECK(std::abs((s22 * s1y - s12 * s2y) / det - 0.5) < 0.02);
    CHECK(std::abs((s11 * s2y - s12 * s1y) / det - 0.5) < 0.02);
}

TEST_CASE("random walk with drift fit") {
    SUBCASE("ramp has zero variance") {
        const std::vector<double> y = {0, 1, 2, 3, 4};
        CHECK(kind_of([&] { fit_random_walk_drift(y, Window::all(5)); }) == ErrorKind::DegenerateVariance);
    }
    SUBCASE("arithmetic") {
        const std::vector<double> y = {0, 2, 2, 4, 4};
        const auto m = std::get<RandomWalkDrift>(fit_random_walk_drift(y, Window::all(5)).kind);
        CHECK(m.mu == 1.0);
        CHECK(m.sigma2 == Approx(4.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("short window") {
        const std::vector<double> y = {0, 1};
        CHECK(kind_of([&] { fit_random_walk_drift(y, Window::all(2)); }) == ErrorKind::InsufficientData);
        CHECK(kind_of([&] { fit_random_walk_drift(y, Window{0, 5}); }) == ErrorKind::ShapeError);
    }
    SUBCASE("consistency") {
        const auto y = sim_y(Ar1Dgp{1.0, 2.0}, 100000, 4);
        const auto m = std::get<RandomWalkDrift>(fit_random_walk_drift(y, Window::all(y.size())).kind);
        CHECK(std::abs(m.mu) < 0.03);
        CHECK(std::abs(m.sigma2 / 4.0 - 1.0) < 0.02);
    }
}

TEST_CASE("AR(p) conditional least squares") {
    SUBCASE("exact recursion is degenerate") {
        std::vector<double> y(12);
        y[0] = 1.0;
        for (std::size_t t = 1; t < y.size(); ++t) y[t] = 0.5 * y[t - 1];
        CHECK(kind_of([&] { fit_ar(1, y, Window::all(y.size())); }) == ErrorKind::DegenerateVariance);
    }
    SUBCASE("constant series is singular") {
        const std::vector<double> y(20, 3.0);
        CHECK(kind_of([&] { fit_ar(1, y, Window::all(20)); }) == ErrorKind::SingularFit);
    }
    SUBCASE("window must exceed p + 2") {
        const std::vector<double> y = {1, 2, 0, 1};
        CHECK(kind_of([&] { fit_ar(2, y, Window::all(4)); }) == ErrorKind::InsufficientData);
    }
    SUBCASE("AR(1) consistency") {
        const auto y = sim_y(Ar1Dgp{0.9, 2.0}, 100000, 5);
        const auto m = std::get<ArModel>(fit_ar(1, y, Window::all(y.size())).kind);
        CHECK(std::abs(m.coeffs[0] - 0.9) < 0.01);
        CHECK(std::abs(m.sigma2 / 4.0 - 1.0) < 0.02);
    }
    SUBCASE("translation consistency") {
        auto y = sim_y(Ar1Dgp{0.9, 2.0}, 2000, 6);
        const auto a = std::get<ArModel>(fit_ar(2, y, Window::all(y.size())).kind);
        const double c = 7.5;
        for (double& v : y) v += c;
        const auto b = std::get<ArModel>(fit_ar(2, y, Window::all(y.size())).kind);
        CHECK(b.coeffs[0] == Approx(a.coeffs[0]).epsilon(1e-8));
        CHECK(b.coeffs[1] == Approx(a.coeffs[1]).epsilon(1e-8));
        CHECK(b.intercept == Approx(a.intercept + c * (1.0 - a.coeffs[0] - a.coeffs[1])).epsilon(1e-8));
    }
    SUBCASE("stationarity enforcement") {
        std::vector<double> y(200);
        CounterRng rng(2);
        y[0] = 1.0;
        for (std::size_t t = 1; t < y.size(); ++t) y[t] = 1.02 * y[t - 1] + 0.1 * rng.normal();
        const auto raw = std::get<ArModel>(fit_ar(1, y, Window::all(y.size())).kind);
        const auto enf = std::get<ArModel>(fit_ar(1, y, Window::all(y.size()), {.enforce_stationarity = true}).kind);
        CHECK(raw.coeffs[0] > 1.0);
        CHECK(std::abs(enf.coeffs[0]) < 1.0);
        CHECK(enf.sigma2 >= raw.sigma2);
    }
}

TEST_CASE("AR(2) on ARMA(2,1) data approaches the Yule-Walker pseudo-truth") {
    const auto [phi1, phi2] = oracle::ar2_pseudo_true(1.4, -0.6, 0.285, 2.0);
    // Oracle value frozen here; statsmodels' ArmaProcess.acovf agrees to 1e-14.
    CHECK(phi1 == Approx(1.5323132099985954).epsilon(1e-12));
    CHECK(phi2 == Approx(-0.7180115900892353).epsilon(1e-12));
    const auto y = sim_y(Arma21Dgp{1.4, -0.6, 0.285, 2.0}, 1000000, 12);
    const auto m = std::get<ArModel>(fit_ar(2, y, Window::all(y.size())).kind);
    CHECK(std::abs(m.coeffs[0] - phi1) < 0.02);
    CHECK(std::abs(m.coeffs[1] - phi2) < 0.02);
}

TEST_CASE("CSS objective derivatives match central differences") {
    const auto y = sim_y(Arma21Dgp{1.4, -0.6, 0.285, 1.0}, 400, 13);
    const Window w = Window::all(y.size());
    CounterRng rng(99);
    for (int k = 0; k < 20; ++k) {
        Eigen::Vector4d p(0.2 * rng.normal(), 1.0 + 0.4 * rng.uniform(), -0.5 + 0.3 * rng.uniform(),
                          -0.6 + 1.2 * rng.uniform());
        const CssObjective obj = css_objective(y, w, p);
        CHECK(obj.loss == Approx(css_loss_direct(y, p(0), p(1), p(2), p(3))).epsilon(1e-12));
        const double h = 1e-5;
        for (int i = 0; i < 4; ++i) {
            Eigen::Vector4d up = p, dn = p;
            up(i) += h;
            dn(i) -= h;
            const CssObjective ou = css_objective(y, w, up), od = css_objective(y, w, dn);
            const double g_fd = (ou.loss - od.loss) / (2 * h);
            CHECK(std::abs(g_fd - obj.gradient(i)) <= 1e-4 * std::max(1.0, std::abs(obj.gradient(i))));
            for (int j = 0; j < 4; ++j) {
                const double h_fd = (ou.gradient(j) - od.gradient(j)) / (2 * h);
                CHECK(std::abs(h_fd - obj.hessian(i, j)) <= 1e-4 * std::max(1.0, std::abs(obj.hessian(i, j))));
            }
        }
        CHECK((obj.hessian - obj.hessian.transpose()).cwiseAbs().maxCoeff() < 1e-9 * obj.hessian.norm());
    }
}

TEST_CASE("ARMA(2,1) CSS fit") {
    SUBCASE("recovers the generating parameters") {
        const auto y = sim_y(Arma21Dgp{1.4, -0.6, 0.285, 1.0}, 100000, 14);
        const auto m = std::get<Arma21Model>(fit_arma21_css(y, Window::all(y.size())).kind);
        CHECK(std::abs(m.rho1 - 1.4) < 0.02);
        CHECK(std::abs(m.rho2 + 0.6) < 0.02);
        CHECK(std::abs(m.theta - 0.285) < 0.02);
        CHECK(std::abs(m.sigma2 - 1.0) < 0.02);
        CHECK(arma21_admissible(m.rho1, m.rho2, m.theta));
    }
    SUBCASE("pure AR(2) data gives theta near zero") {
        const auto y = sim_y(Arma21Dgp{1.5, -0.7, 0.0, 1.0}, 100000, 15);
        const auto m = std::get<Arma21Model>(fit_arma21_css(y, Window::all(y.size())).kind);
        CHECK(std::abs(m.theta) < 0.02);
        CHECK(std::abs(m.rho1 - 1.5) < 0.02);
    }
    SUBCASE("constant series") {
        const std::vector<double> y(100, 1.0);
        CHECK(kind_of([&] { fit_arma21_css(y, Window::all(100)); }) == ErrorKind::SingularFit);
    }
    SUBCASE("window too short") {
        const auto y = sim_y(Arma21Dgp{}, 40, 1);
        CHECK(kind_of([&] { fit_arma21_css(y, Window::all(40)); }) == ErrorKind::InsufficientData);
    }
    SUBCASE("non-convergence carries the best iterate") {
        const auto y = sim_y(Arma21Dgp{}, 500, 2);
        try {
            fit_arma21_css(y, Window::all(y.size()), {.max_iterations = 1});
            FAIL("expected FitDidNotConvergeError");
        } catch (const FitDidNotConvergeError& e) {
            CHECK(e.kind() == ErrorKind::FitDidNotConverge);
            CHECK(e.best_iterate().name() == "arma(2,1)");
            CHECK(e.best_iterate().sigma2() > 0.0);
        }
    }
    SUBCASE("typical replication-size windows converge") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            const auto y = sim_y(Arma21Dgp{1.4, -0.6, 0.285, 2.0}, 500, seed);
            CHECK_NOTHROW(fit_arma21_css(y, Window::all(500)));
        }
    }
}

TEST_CASE("admissible region") {
    CHECK(arma21_admissible(1.4, -0.6, 0.285));
    CHECK_FALSE(arma21_admissible(1.0, 0.2, 0.0));
    CHECK_FALSE(arma21_admissible(0.5, 0.0, 1.0));
    CHECK_FALSE(arma21_admissible(0.5, 0.0, 0.99995, 1e-4));
}

TEST_CASE("combination weights") {
    std::vector<double> f1(50), f2(50), y(50);
    CounterRng rng(3);
    for (int i = 0; i < 50; ++i) f1[i] = rng.normal(), f2[i] = rng.normal();
    SUBCASE("exact interpolation") {
        for (int i = 0; i < 50; ++i) y[i] = 0.5 * f1[i] + 0.5 * f2[i];
        CHECK(fit_combo(y, f1, f2, ComboMode::Optimal).weight == Approx(0.5).epsilon(1e-12));
        for (int i = 0; i < 50; ++i) y[i] = 0.25 * f1[i] + 0.75 * f2[i];
        CHECK(fit_combo(y, f1, f2, ComboMode::Optimal).weight == Approx(0.25).epsilon(1e-12));
        CHECK(fit_combo(y, f1, f2, ComboMode::Equal).weight == 0.5);
    }
    SUBCASE("clipping to the simplex") {
        for (int i = 0; i < 50; ++i) y[i] = 2.0 * f1[i] - f2[i];
        CHECK(fit_combo(y, f1, f2, ComboMode::Optimal).weight == 1.0);
        for (int i = 0; i < 50; ++i) y[i] = -f1[i] + 2.0 * f2[i];
        CHECK(fit_combo(y, f1, f2, ComboMode::Optimal).weight == 0.0);
    }
    SUBCASE("identical forecasts are flagged") {
        const auto w = fit_combo(y, f1, f1, ComboMode::Optimal);
        CHECK(w.weight == 0.5);
        CHECK(w.degenerate);
    }
    SUBCASE("shape errors") {
        CHECK(kind_of([&] { fit_combo(std::span(y).first(10), f1, f2, ComboMode::Optimal); }) ==
              ErrorKind::ShapeError);
    }
}

TEST_CASE("optimal combination weight on simulated leading-indicator data") {
    // Population weight of the univariate-regression fitted values: with
    // f1 = w X1 and f2 = (1-w) X2, argmin E[(Y - a f1 - (1-a) f2)^2] is
    // w^2 V1 / (w^2 V1 + (1-w)^2 V2), V_i the indicator variances.
    const double v1 = 1.0 + 0.25 + 0.285 * 0.285, v2 = 1.0 + 0.25 + 0.57 * 0.57;
    const auto pop = [&](double w) { return w * w * v1 / (w * w * v1 + (1 - w) * (1 - w) * v2); };
    CHECK(pop(0.25) == Approx(0.0858559881847).epsilon(1e-10));
    CHECK(pop(0.5) == Approx(0.4580756161555).epsilon(1e-10));
    for (double w : {0.25, 0.5}) {
        const auto s = simulate({ComboDgp{w, 2.0}, 100000, 31});
        const auto fm = fit_combination(s.y, s.x1, s.x2, Window::all(s.y.size()), ComboMode::Optimal);
        const auto m = std::get<ComboOptimal>(fm.kind);
        CHECK(std::abs(m.weight_hat - pop(w)) < 0.01);
        CHECK(std::abs(m.beta1[1] - w) < 0.02);
        CHECK(std::abs(m.beta2[1] - (1 - w)) < 0.02);
    }
}

TEST_CASE("one-step forecasts") {
    CHECK(forecast_one_step({RandomWalkDrift{1.0, 4.0}, {}}, std::vector<double>{3.0, 10.0}).mean == 11.0);
    CHECK(forecast_one_step({RandomWalkDrift{1.0, 4.0}, {}}, std::vector<double>{10.0}).variance == 4.0);
    const FittedMethod ar{ArModel{0.0, {0.5}, 1.0}, {}};
    const auto p = forecast_one_step(ar, std::vector<double>{2.0});
    CHECK(p.mean == 1.0);
    CHECK(p.variance == 1.0);
    CHECK(kind_of([&] { forecast_one_step(ar, std::vector<double>{}); }) == ErrorKind::InsufficientData);
    const FittedMethod combo{ComboOptimal{{1.0, 2.0}, {0.0, -1.0}, 0.25, 1.0, false}, {}};
    CHECK(forecast_one_step(combo, std::vector<double>{}, {1.0, 2.0}).mean == Approx(0.25 * 3.0 + 0.75 * -2.0));
}

TEST_CASE("ARMA forecast matches a from-scratch refilter") {
    const auto y = sim_y(Arma21Dgp{1.4, -0.6, 0.285, 2.0}, 300, 16);
    const Arma21Model m{0.1, 1.35, -0.55, 0.3, 4.0};
    const FittedMethod fm{m, {}};
    OneStepForecaster inc(fm);
    for (std::size_t n = 2; n < y.size(); ++n) {
        // Brute force: innovations from t = 2 with e_1 = 0, then predict y[n].
        double e_prev = 0.0;
        for (std::size_t t = 2; t < n; ++t) {
            e_prev = y[t] - m.intercept - m.rho1 * y[t - 1] - m.rho2 * y[t - 2] - m.theta * e_prev;
        }
        const double ref = m.intercept + m.rho1 * y[n - 1] + m.rho2 * y[n - 2] + m.theta * e_prev;
        const auto hist = std::span(y).first(n);
        CHECK(forecast_one_step(fm, hist).mean == Approx(ref).epsilon(1e-10));
        while (inc.observed() < n) inc.observe(y[inc.observed()]);
        CHECK(inc.predict().mean == Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("recursive Newton update") {
    const auto quad_step = [](NewtonState s, double y) {
        Eigen::VectorXd g(1);
        g(0) = 2.0 * (s.theta(0) - y);
        return recursive_newton_update(s, g, Eigen::MatrixXd::Constant(1, 1, 2.0));
    };
    SUBCASE("running mean with lambda = 1") {
        NewtonState s{Eigen::VectorXd::Constant(1, 2.0), Eigen::MatrixXd::Constant(1, 1, 2.0), 1.0, 0.0};
        s = quad_step(s, 4.0);
        CHECK(s.theta(0) == Approx(3.0).epsilon(1e-15));
        s = quad_step(s, 6.0);
        CHECK(s.theta(0) == Approx(4.0).epsilon(1e-15));
    }
    SUBCASE("geometric weighting matches the weighted mean") {
        CounterRng rng(7);
        std::vector<double> ys(200);
        for (double& v : ys) v = 3.0 + rng.normal();
        const double lambda = 0.95;
        NewtonState s{Eigen::VectorXd::Constant(1, ys[0]), Eigen::MatrixXd::Constant(1, 1, 2.0), lambda, 0.0};
        for (std::size_t n = 1; n < ys.size(); ++n) {
            s = quad_step(s, ys[n]);
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k <= n; ++k) {
                const double wk = std::pow(lambda, static_cast<double>(n - k));
                num += wk * ys[k];
                den += wk;
            }
            CHECK(s.theta(0) == Approx(num / den).epsilon(1e-10));
        }
    }
    SUBCASE("multivariate batch least squares") {
        // l_t(b) = (y_t - x_t'b)^2: the lambda=1 recursion reproduces batch OLS.
        CounterRng rng(8);
        const int n = 60;
        Eigen::MatrixXd x(n, 2);
        Eigen::VectorXd y(n);
        for (int t = 0; t < n; ++t) {
            x(t, 0) = 1.0;
            x(t, 1) = rng.normal();
            y(t) = 0.5 - 1.5 * x(t, 1) + 0.3 * rng.normal();
        }
        const int n0 = 5;
        const Eigen::MatrixXd x0 = x.topRows(n0);
        NewtonState s;
        s.hessian = 2.0 * x0.transpose() * x0;
        s.theta = (x0.transpose() * x0).ldlt().solve(x0.transpose() * y.head(n0));
        s.lambda = 1.0;
        for (int t = n0; t < n; ++t) {
            const Eigen::VectorXd xt = x.row(t).transpose();
            const Eigen::VectorXd g = -2.0 * xt * (y(t) - xt.dot(s.theta));
            s = recursive_newton_update(s, g, 2.0 * xt * xt.transpose());
            const Eigen::MatrixXd xb = x.topRows(t + 1);
            const Eigen::VectorXd batch = (xb.transpose() * xb).ldlt().solve(xb.transpose() * y.head(t + 1));
            CHECK((s.theta - batch).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    SUBCASE("ridge fallback on a singular accumulation") {
        NewtonState s{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2), 1.0, 0.0};
        Eigen::MatrixXd h(2, 2);
        h << 1.0, 1.0, 1.0, 1.0;
        Eigen::VectorXd g(2);
        g << 1.0, 1.0;
        const NewtonState out = recursive_newton_update(s, g, h);
        CHECK(out.ridge >= 1e-8);
        CHECK(out.theta.allFinite());
        CHECK((out.hessian - h).norm() == 0.0);
    }
    SUBCASE("errors") {
        NewtonState s{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 1.0, 0.0};
        Eigen::VectorXd g(1);
        g(0) = NAN;
        CHECK(kind_of([&] { recursive_newton_update(s, g, Eigen::MatrixXd::Identity(1, 1)); }) ==
              ErrorKind::NumericalError);
        g(0) = 1.0;
        CHECK_THROWS_AS(recursive_newton_update(s, g, Eigen::MatrixXd::Identity(2, 2)), Error);
        s.lambda = 1.5;
        CHECK_THROWS_AS(recursive_newton_update(s, g, Eigen::MatrixXd::Identity(1, 1)), Error);
    }
}
