#include "ssre/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ssre/error.hpp"
#include "ssre/numeric.hpp"

namespace ssre {

std::string_view to_string(BoundaryScheme scheme) noexcept {
    return scheme == BoundaryScheme::TwoSided ? "TWO_SIDED" : "MODIFIED";
}

std::string_view to_string(Decision d) noexcept {
    switch (d) {
        case Decision::SelectQ: return "SELECT_Q";
        case Decision::SelectP: return "SELECT_P";
        case Decision::TruncatedSelectQ: return "TRUNCATED_SELECT_Q";
        case Decision::TruncatedSelectP: return "TRUNCATED_SELECT_P";
    }
    return "SELECT_Q";
}

Boundaries Boundaries::from_logs(double log_k_l, double log_k_u, std::optional<double> beta,
                                 BoundaryScheme scheme) {
    if (!(log_k_l <= 0.0) || !(log_k_u > 0.0)) {
        throw Error(ErrorKind::InvalidRisk, "boundaries must satisfy k_l <= 1 < k_u");
    }
    Boundaries b;
    b.log_k_l = log_k_l;
    b.log_k_u = log_k_u;
    b.k_l = std::exp(log_k_l);
    b.k_u = std::exp(log_k_u);
    b.beta = beta;
    b.scheme = scheme;
    return b;
}

namespace {

void require_risk(double beta, const char* name) {
    if (!(beta > 0.0 && beta < 0.5)) {
        throw Error(ErrorKind::InvalidRisk, std::string(name) + " must lie in (0, 1/2), got " + std::to_string(beta));
    }
}

}  // namespace

Boundaries boundaries_from_beta(double beta, OmegaRate omega) {
    require_risk(beta, "beta");
    const double log_odds = std::log(beta / (1.0 - beta));
    return Boundaries::from_logs(log_odds / omega.value(), -log_odds / omega.value(), beta,
                                 BoundaryScheme::TwoSided);
}

Boundaries modified_boundary(double beta, std::optional<double> k_u_override) {
    require_risk(beta, "beta");
    double log_k_u = std::log((1.0 - beta) / beta);
    if (k_u_override) {
        if (!(*k_u_override > 1.0) || !std::isfinite(*k_u_override)) {
            throw Error(ErrorKind::InvalidRisk, "k_u override must be finite and > 1");
        }
        log_k_u = std::log(*k_u_override);
    }
    Boundaries b = Boundaries::from_logs(0.0, log_k_u, beta, BoundaryScheme::Modified);
    if (k_u_override) b.k_u = *k_u_override;
    return b;
}

SsreOutcome run_ssre(std::span<const double> log_c_path, const Boundaries& bounds,
                     std::optional<std::size_t> n_max) {
    if (log_c_path.empty()) throw Error(ErrorKind::ShapeError, "SSRE needs a nonempty path");
    const std::size_t horizon = n_max.value_or(log_c_path.size());
    if (horizon == 0 || horizon > log_c_path.size()) {
        throw Error(ErrorKind::ShapeError, "n_max must lie in [1, path length]");
    }
    SsreOutcome out;
    for (std::size_t n = 0; n < horizon; ++n) {
        const double v = log_c_path[n];
        if (std::isnan(v)) throw Error(ErrorKind::NumericalError, "NaN in log C path");
        if (v <= bounds.log_k_l || v >= bounds.log_k_u) {
            out.stopping_time = n + 1;
            out.decision = v <= bounds.log_k_l ? Decision::SelectQ : Decision::SelectP;
            out.crossing_log_value = v;
            out.path.assign(log_c_path.begin(), log_c_path.begin() + static_cast<std::ptrdiff_t>(n + 1));
            return out;
        }
    }
    const double last = log_c_path[horizon - 1];
    out.stopping_time = horizon;
    out.truncated = true;
    out.decision = last > 0.0 ? Decision::TruncatedSelectP : Decision::TruncatedSelectQ;
    out.tie_break = last == 0.0;
    out.crossing_log_value = last;
    out.path.assign(log_c_path.begin(), log_c_path.begin() + static_cast<std::ptrdiff_t>(horizon));
    return out;
}

SsreOutcome run_mean_evalue_test(std::span<const double> cumulative_delta, std::span<const OmegaRate> rates,
                                 const Boundaries& bounds) {
    if (cumulative_delta.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "mean e-value test needs a window of at least 2");
    }
    const EProcessState state = build_eprocess(cumulative_delta, rates);
    const auto& avg = state.log_avg_path;
    SsreOutcome out;
    for (std::size_t m = 0; m < avg.size(); ++m) {
        if (avg[m] >= bounds.log_k_u) {
            out.stopping_time = m + 1;
            out.decision = Decision::SelectP;
            out.crossing_log_value = avg[m];
            out.path.assign(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(m + 1));
            return out;
        }
    }
    out.stopping_time = avg.size();
    out.crossing_log_value = avg.back();
    out.path = avg;
    if (avg.back() <= bounds.log_k_l) {
        out.decision = Decision::SelectQ;
    } else {
        out.decision = Decision::TruncatedSelectQ;
        out.truncated = true;
    }
    return out;
}

double empirical_log_mgf(std::span<const double> z, double h) {
    std::vector<double> scaled(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) scaled[i] = h * z[i];
    return log_sum_exp(scaled) - std::log(static_cast<double>(z.size()));
}

double mgf_root(std::span<const double> z, const MgfRootOptions& opts) {
    if (z.size() < 2) throw Error(ErrorKind::InsufficientData, "mgf_root needs at least two samples");
    double mean = 0.0;
    for (double v : z) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NumericalError, "non-finite sample");
        mean += v;
    }
    const double n = static_cast<double>(z.size());
    mean /= n;
    double ss = 0.0;
    for (double v : z) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    if (mean == 0.0 || std::abs(mean) < opts.min_abs_t * se) {
        throw Error(ErrorKind::IllConditioned, "sample mean is indistinguishable from zero");
    }
    const double side = mean < 0.0 ? 1.0 : -1.0;
    if (std::none_of(z.begin(), z.end(), [&](double v) { return side * v > 0.0; })) {
        throw Error(ErrorKind::NoRootError, "samples are one-sided; the MGF never returns to 1");
    }

    // f(h) = log m(side*h) is negative just right of 0 and eventually positive.
    const auto f = [&](double h) { return empirical_log_mgf(z, side * h); };
    double lo = opts.initial_step;
    int shrink = 0;
    while (f(lo) >= 0.0) {
        lo *= 0.5;
        if (++shrink > 80) throw Error(ErrorKind::IllConditioned, "could not bracket the MGF root from below");
    }
    double hi = lo;
    while (f(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw Error(ErrorKind::NoRootError, "MGF root bracket diverged");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    const double root = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
    return side * root;
}

Boundaries wald_boundaries(double beta_q, double beta_p, double h_eff) {
    require_risk(beta_q, "beta_q");
    require_risk(beta_p, "beta_p");
    if (!(h_eff > 0.0) || !std::isfinite(h_eff)) {
        throw Error(ErrorKind::InvalidTilt, "effective tilt must be finite and > 0");
    }
    return Boundaries::from_logs(std::log(beta_q / (1.0 - beta_p)) / h_eff,
                                 std::log((1.0 - beta_q) / beta_p) / h_eff, std::nullopt,
                                 BoundaryScheme::TwoSided);
}

ErrorRates error_rates(double k_l, double k_u, double h_eff_q, double h_eff_p) {
    if (!(k_l > 0.0 && k_l < 1.0 && k_u > 1.0)) {
        throw Error(ErrorKind::InvalidRisk, "error rates need 0 < k_l < 1 < k_u");
    }
    if (!(h_eff_q > 0.0) || !(h_eff_p > 0.0)) throw Error(ErrorKind::InvalidTilt, "exponents must be > 0");
    const double lower = std::pow(k_l, h_eff_q);
    const double upper = std::pow(k_u, h_eff_p);
    const double den = upper - lower;
    if (!(den >= 1e-12)) throw Error(ErrorKind::IllConditioned, "boundaries are numerically coincident");
    return {lower * (upper - 1.0) / den, (1.0 - lower) / den};
}

std::uint64_t min_sample_size(double expected_stop, double target_prob) {
    if (!(expected_stop > 0.0) || !std::isfinite(expected_stop)) {
        throw Error(ErrorKind::InvalidConfig, "expected stopping time must be > 0");
    }
    if (!(target_prob > 0.0 && target_prob < 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "target probability must lie in (0, 1)");
    }
    // 1 - p is inexact in binary, so allow a few ulps of slack before rounding up.
    const double raw = expected_stop / (1.0 - target_prob);
    auto n = static_cast<std::uint64_t>(std::ceil(raw * (1.0 - 1e-12)));
    n = std::max<std::uint64_t>(n, 1);
    while (1.0 - expected_stop / static_cast<double>(n) < target_prob - 1e-12) ++n;
    return n;
}

StoppingTimeStats stopping_time_stats(std::span<const std::size_t> times, std::size_t truncated_count) {
    if (times.size() < 100) throw Error(ErrorKind::InsufficientData, "need at least 100 stopping times");
    StoppingTimeStats s;
    s.count = times.size();
    const double m = static_cast<double>(times.size());
    for (std::size_t t : times) {
        const double v = static_cast<double>(t);
        double p = 1.0;
        for (double& mom : s.raw_moments) {
            p *= v;
            mom += p;
        }
        s.max = std::max(s.max, t);
    }
    for (double& mom : s.raw_moments) mom /= m;
    s.mean = s.raw_moments[0];
    double ss = 0.0;
    for (std::size_t t : times) ss += (static_cast<double>(t) - s.mean) * (static_cast<double>(t) - s.mean);
    s.variance = ss / (m - 1.0);
    s.truncation_frequency = static_cast<double>(truncated_count) / m;

    std::vector<std::size_t> sorted(times.begin(), times.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t start = sorted[static_cast<std::size_t>(std::floor(0.7 * (m - 1.0)))];
    std::vector<double> xs, ys;
    for (std::size_t n = start; n <= s.max; ++n) {
        const auto survivors = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), n));
        if (survivors < 5) break;
        xs.push_back(static_cast<double>(n));
        ys.push_back(std::log(static_cast<double>(survivors) / m));
    }
    s.tail_points = xs.size();
    if (xs.size() < 3) {
        s.tail_slope = std::numeric_limits<double>::quiet_NaN();
        s.tail_r2 = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    s.tail_slope = sxy / sxx;
    s.tail_r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return s;
}

StoppingTimeStats stopping_time_stats(std::span<const SsreOutcome> outcomes) {
    std::vector<std::size_t> times;
    times.reserve(outcomes.size());
    std::size_t truncated = 0;
    for (const auto& o : outcomes) {
        times.push_back(o.stopping_time);
        truncated += o.truncated ? 1 : 0;
    }
    return stopping_time_stats(times, truncated);
}

}  // namespace ssre
