#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ssre/error.hpp"
#include "ssre/harness.hpp"
#include "ssre/rng.hpp"
#include "ssre/sequential.hpp"

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

std::vector<double> cumulative(const std::vector<double>& d) {
    std::vector<double> c(d.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) c[i] = (acc += d[i]);
    return c;
}

}  // namespace

TEST_CASE("two-sided boundaries from beta") {
    const auto b = boundaries_from_beta(0.1, OmegaRate(1.0));
    CHECK(b.k_l == Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(b.k_u == Approx(9.0).epsilon(1e-14));
    CHECK(b.scheme == BoundaryScheme::TwoSided);
    const auto h = boundaries_from_beta(0.1, OmegaRate(0.5));
    CHECK(h.k_l == Approx(1.0 / 81.0).epsilon(1e-13));
    CHECK(h.k_u == Approx(81.0).epsilon(1e-13));
    CHECK(kind_of([] { boundaries_from_beta(0.5, OmegaRate(1.0)); }) == ErrorKind::InvalidRisk);
    CHECK(kind_of([] { boundaries_from_beta(0.0, OmegaRate(1.0)); }) == ErrorKind::InvalidRisk);
}

TEST_CASE("modified boundary") {
    const auto f = modified_boundary(0.1);
    CHECK(f.k_l == 1.0);
    CHECK(f.log_k_l == 0.0);
    CHECK(f.k_u == Approx(9.0).epsilon(1e-14));
    CHECK(f.scheme == BoundaryScheme::Modified);
    const auto o = modified_boundary(0.1, kPublishedUpperBoundary);
    CHECK(o.k_u == 11.11);
    CHECK(o.log_k_u == Approx(std::log(11.11)).epsilon(1e-15));
    CHECK(modified_boundary(0.25).k_u == Approx(3.0).epsilon(1e-14));
    CHECK(kind_of([] { modified_boundary(0.6); }) == ErrorKind::InvalidRisk);
    CHECK(kind_of([] { modified_boundary(0.1, 0.5); }) == ErrorKind::InvalidRisk);
}

TEST_CASE("first-exit rule") {
    const auto b = boundaries_from_beta(0.1, OmegaRate(1.0));
    SUBCASE("upper exit") {
        const auto o = run_ssre(cumulative(std::vector<double>(10, std::log(3.0))), b);
        CHECK(o.stopping_time == 2);
        CHECK(o.decision == Decision::SelectP);
        CHECK(std::exp(o.crossing_log_value) == Approx(9.0));
        CHECK_FALSE(o.truncated);
        CHECK(o.path.size() == 2);
        CHECK(o.selects_p());
    }
    SUBCASE("lower exit") {
        const auto o = run_ssre(cumulative(std::vector<double>(10, -std::log(3.0))), b);
        CHECK(o.stopping_time == 2);
        CHECK(o.decision == Decision::SelectQ);
    }
    SUBCASE("truncation ties go to the benchmark") {
        const auto o = run_ssre(std::vector<double>(80, 0.0), b, 50);
        CHECK(o.stopping_time == 50);
        CHECK(o.decision == Decision::TruncatedSelectQ);
        CHECK(o.truncated);
        CHECK(o.tie_break);
    }
    SUBCASE("truncation by sign") {
        CHECK(run_ssre(std::vector<double>(5, 0.5), b).decision == Decision::TruncatedSelectP);
        CHECK(run_ssre(std::vector<double>(5, -0.5), b).decision == Decision::TruncatedSelectQ);
        CHECK_FALSE(run_ssre(std::vector<double>(5, -0.5), b).tie_break);
    }
    SUBCASE("truncating after the crossing does not change the outcome") {
        CounterRng rng(3);
        std::vector<double> d(300);
        for (double& v : d) v = 0.2 + rng.normal();
        const auto path = cumulative(d);
        const auto full = run_ssre(path, b);
        REQUIRE_FALSE(full.truncated);
        const auto cut = run_ssre(std::span(path).first(full.stopping_time), b);
        CHECK(cut.stopping_time == full.stopping_time);
        CHECK(cut.decision == full.decision);
        CHECK(cut.path == full.path);
    }
    SUBCASE("boundary hits are inclusive and decided in logs") {
        CHECK(run_ssre(std::vector<double>{b.log_k_u}, b).decision == Decision::SelectP);
        CHECK(run_ssre(std::vector<double>{b.log_k_l}, b).decision == Decision::SelectQ);
        CHECK(run_ssre(std::vector<double>{1e6}, b).decision == Decision::SelectP);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(run_ssre(std::vector<double>{}, b), Error);
        CHECK_THROWS_AS(run_ssre(std::vector<double>{0.0}, b, 2), Error);
        CHECK_THROWS_AS(run_ssre(std::vector<double>{NAN}, b), Error);
    }
    CHECK(to_string(Decision::TruncatedSelectP) == "TRUNCATED_SELECT_P");
    CHECK(to_string(Decision::SelectQ) == "SELECT_Q");
}

TEST_CASE("mean e-value test") {
    const auto b = modified_boundary(0.1, kPublishedUpperBoundary);
    SUBCASE("explosive evidence") {
        std::vector<double> delta(20);
        for (std::size_t m = 0; m < delta.size(); ++m) delta[m] = static_cast<double>(m + 1) * std::log(100.0);
        const auto o = run_mean_evalue_test(delta, default_rates(), b);
        CHECK(o.decision == Decision::SelectP);
        CHECK(o.stopping_time <= 3);
    }
    SUBCASE("no evidence") {
        const auto o = run_mean_evalue_test(std::vector<double>(100, 0.0), default_rates(), b);
        // Ebar_100 = 101/200 ends at or below k_l = 1.
        CHECK(o.stopping_time == 100);
        CHECK(o.decision == Decision::SelectQ);
        CHECK_FALSE(o.truncated);
        for (std::size_t m = 1; m <= 100; ++m) {
            CHECK(std::exp(o.path[m - 1]) == Approx((m + 1.0) / (2.0 * m)).epsilon(1e-13));
        }
    }
    SUBCASE("weak evidence ends between the boundaries") {
        // Constant Delta = 2: the average peaks at about 3.92 (m = 1) and ends near 1.98.
        const auto o = run_mean_evalue_test(std::vector<double>(100, 2.0), default_rates(), b);
        CHECK(o.decision == Decision::TruncatedSelectQ);
        CHECK(o.truncated);
        CHECK_FALSE(o.selects_p());
        const double ends = (std::exp(0.5) + std::exp(1.0) + std::exp(2.0)) / 3.0 * 101.0 / 200.0;
        CHECK(std::exp(o.crossing_log_value) == Approx(ends).epsilon(1e-12));
    }
    SUBCASE("strong evidence for the benchmark ends below k_l") {
        std::vector<double> delta(50);
        for (std::size_t m = 0; m < delta.size(); ++m) delta[m] = -static_cast<double>(m + 1);
        CHECK(run_mean_evalue_test(delta, default_rates(), b).decision == Decision::SelectQ);
    }
    SUBCASE("window too short") {
        CHECK(kind_of([&] { run_mean_evalue_test(std::vector<double>{0.0}, default_rates(), b); }) ==
              ErrorKind::InsufficientData);
    }
}

TEST_CASE("MGF root") {
    const auto draw = [](double mu, std::size_t n, std::uint64_t seed) {
        oracle::Xorshift rng(seed);
        std::vector<double> z(n);
        for (double& v : z) v = mu + rng.normal();
        return z;
    };
    SUBCASE("Gaussian closed form: h = -2 mu / s^2") {
        const auto z = draw(-0.5, 1000000, 1);
        const double h = mgf_root(z);
        CHECK(std::abs(h - 1.0) <= 0.02);
        CHECK(std::abs(std::exp(empirical_log_mgf(z, h)) - 1.0) <= 1e-10);
        const auto zp = draw(0.5, 1000000, 2);
        CHECK(std::abs(mgf_root(zp) + 1.0) <= 0.02);
    }
    SUBCASE("negation symmetry and opposite sign") {
        auto z = draw(0.3, 20000, 3);
        const double h = mgf_root(z);
        CHECK(h < 0.0);
        for (double& v : z) v = -v;
        CHECK(mgf_root(z) == Approx(-h).epsilon(1e-9));
    }
    SUBCASE("convexity along the bracket") {
        const auto z = draw(-0.4, 5000, 4);
        const double h = mgf_root(z);
        std::vector<double> m;
        for (int i = 0; i <= 40; ++i) m.push_back(std::exp(empirical_log_mgf(z, h * i / 20.0)));
        for (std::size_t i = 1; i + 1 < m.size(); ++i) CHECK(m[i - 1] - 2 * m[i] + m[i + 1] >= -1e-8);
    }
    SUBCASE("errors") {
        CHECK(kind_of([] { mgf_root(std::vector<double>{1.0, 2.0, 3.0}); }) == ErrorKind::NoRootError);
        CHECK(kind_of([] { mgf_root(std::vector<double>{-1.0, 1.0, -1.0, 1.0}); }) == ErrorKind::IllConditioned);
        std::vector<double> near_zero(100);
        for (std::size_t i = 0; i < near_zero.size(); ++i) near_zero[i] = (i % 2 ? 1.0 : -1.0) + 1e-6;
        CHECK(kind_of([&] { mgf_root(near_zero); }) == ErrorKind::IllConditioned);
    }
}

TEST_CASE("Wald boundaries and error rates") {
    const auto b = wald_boundaries(0.1, 0.1, 1.0);
    CHECK(b.k_l == Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(b.k_u == Approx(9.0).epsilon(1e-14));
    const auto c = wald_boundaries(0.05, 0.1, 1.0);
    CHECK(c.k_l == Approx(0.05 / 0.9).epsilon(1e-14));
    CHECK(c.k_u == Approx(9.5).epsilon(1e-14));
    const auto d = wald_boundaries(0.1, 0.1, 2.0);
    CHECK(d.k_l == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(d.k_u == Approx(3.0).epsilon(1e-14));
    CHECK(kind_of([] { wald_boundaries(0.1, 0.1, 0.0); }) == ErrorKind::InvalidTilt);
    CHECK(kind_of([] { wald_boundaries(0.1, 0.1, -1.0); }) == ErrorKind::InvalidTilt);

    const auto r = error_rates(1.0 / 9.0, 9.0, 1.0, 1.0);
    CHECK(r.beta_q == Approx(0.1).epsilon(1e-12));
    CHECK(r.beta_p == Approx(0.1).epsilon(1e-12));
    const auto s = error_rates(0.5, 2.0, 1.0, 1.0);
    CHECK(s.beta_q == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(s.beta_p == Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(kind_of([] { error_rates(1.0 - 1e-14, 1.0 + 1e-14, 1.0, 1.0); }) == ErrorKind::IllConditioned);

    CounterRng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const double bq = 0.001 + 0.498 * rng.uniform();
        const double bp = 0.001 + 0.498 * rng.uniform();
        const double h = 0.05 + 5.0 * rng.uniform();
        const auto w = wald_boundaries(bq, bp, h);
        const auto back = error_rates(w.k_l, w.k_u, h, h);
        CHECK(std::abs(back.beta_q - bq) <= 1e-10);
        CHECK(std::abs(back.beta_p - bp) <= 1e-10);
    }
}

TEST_CASE("Markov planner") {
    CHECK(min_sample_size(20.0, 0.9) == 200);
    CHECK(min_sample_size(5.0, 0.5) == 10);
    CHECK(min_sample_size(7.0, 0.3) == 10);
    CHECK_THROWS_AS(min_sample_size(0.0, 0.5), Error);
    CHECK_THROWS_AS(min_sample_size(5.0, 1.0), Error);
}

TEST_CASE("stopping-time summaries") {
    SUBCASE("constant") {
        const std::vector<std::size_t> t(200, 5);
        const auto s = stopping_time_stats(t, 0);
        CHECK(s.mean == 5.0);
        CHECK(s.variance == 0.0);
        CHECK(s.max == 5);
        CHECK(s.truncation_frequency == 0.0);
        CHECK(s.raw_moments[3] == 625.0);
    }
    SUBCASE("geometric tail") {
        oracle::Xorshift rng(5);
        std::vector<std::size_t> t(20000);
        for (auto& v : t) {
            v = 1;
            while (rng.uniform() < 0.5) ++v;
        }
        const auto s = stopping_time_stats(t, 0);
        CHECK(s.tail_slope == Approx(std::log(0.5)).epsilon(0.1));
        CHECK(s.tail_r2 >= 0.8);
        CHECK(s.mean == Approx(2.0).epsilon(0.03));
    }
    SUBCASE("too few") {
        CHECK(kind_of([] { stopping_time_stats(std::vector<std::size_t>(99, 1), 0); }) ==
              ErrorKind::InsufficientData);
    }
    SUBCASE("from outcomes") {
        std::vector<SsreOutcome> o(100);
        for (std::size_t i = 0; i < o.size(); ++i) {
            o[i].stopping_time = i + 1;
            o[i].truncated = i % 10 == 0;
        }
        const auto s = stopping_time_stats(o);
        CHECK(s.mean == 50.5);
        CHECK(s.truncation_frequency == Approx(0.1));
    }
}

TEST_CASE("Markov bound holds on unit-root design alternative stopping times") {
    ExperimentSpec spec;
    spec.hypothesis = Hypothesis::HP;
    spec.score = ScoreKind::LogScore;
    const auto b = boundaries_from_beta(0.1, OmegaRate(1.0));
    std::vector<std::size_t> times;
    for (std::size_t r = 0; r < 1000; ++r) {
        const auto sc = replication_scores(spec, r);
        const auto s = score_diff_series(sc.score_q, sc.score_p);
        times.push_back(run_ssre(s.cumsum, b).stopping_time);
    }
    const auto stats = stopping_time_stats(times, 0);
    const std::uint64_t n = min_sample_size(stats.mean, 0.9);
    std::size_t below = 0;
    for (std::size_t t : times) below += t < n ? 1 : 0;
    CHECK(static_cast<double>(below) / 1000.0 >= 1.0 - stats.mean / static_cast<double>(n));
}
