#include "ssre/harness.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "ssre/error.hpp"

namespace ssre {

std::string_view to_string(Example e) noexcept {
    switch (e) {
        case Example::UnitRootVsAr1: return "UnitRootVsAr1";
        case Example::Ar2VsArma21: return "Ar2VsArma21";
        case Example::ComboEqualVsOptimal: return "ComboEqualVsOptimal";
    }
    return "UnitRootVsAr1";
}

std::string_view to_string(Hypothesis h) noexcept { return h == Hypothesis::HQ ? "HQ" : "HP"; }
std::string_view to_string(KuMode m) noexcept { return m == KuMode::Formula ? "Formula" : "PaperOverride"; }

std::string_view to_string(WindowScheme w) noexcept {
    switch (w) {
        case WindowScheme::Fixed: return "Fixed";
        case WindowScheme::Rolling: return "Rolling";
        case WindowScheme::Expanding: return "Expanding";
    }
    return "Fixed";
}

Example example_from_string(std::string_view s) {
    for (Example e : {Example::UnitRootVsAr1, Example::Ar2VsArma21, Example::ComboEqualVsOptimal}) {
        if (s == to_string(e)) return e;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown example '" + std::string(s) + "'");
}

Hypothesis hypothesis_from_string(std::string_view s) {
    if (s == "HQ") return Hypothesis::HQ;
    if (s == "HP") return Hypothesis::HP;
    throw Error(ErrorKind::InvalidConfig, "unknown hypothesis '" + std::string(s) + "'");
}

KuMode ku_mode_from_string(std::string_view s) {
    if (s == "Formula") return KuMode::Formula;
    if (s == "PaperOverride") return KuMode::PaperOverride;
    throw Error(ErrorKind::InvalidConfig, "unknown k_u_mode '" + std::string(s) + "'");
}

WindowScheme window_scheme_from_string(std::string_view s) {
    for (WindowScheme w : {WindowScheme::Fixed, WindowScheme::Rolling, WindowScheme::Expanding}) {
        if (s == to_string(w)) return w;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown window scheme '" + std::string(s) + "'");
}

void ExperimentSpec::validate() const {
    if (T < 10) throw Error(ErrorKind::InvalidConfig, "T must be >= 10");
    if (R == 0 || R >= T) throw Error(ErrorKind::InvalidConfig, "R must satisfy 0 < R < T");
    if (N < 2 || N > T - R) throw Error(ErrorKind::InvalidConfig, "N must satisfy 2 <= N <= T - R");
    if (M < 1) throw Error(ErrorKind::InvalidConfig, "M must be >= 1");
    if (!(beta > 0.0 && beta < 0.5)) throw Error(ErrorKind::InvalidRisk, "beta must lie in (0, 1/2)");
    if (rates.empty()) throw Error(ErrorKind::InvalidConfig, "at least one learning rate is required");
    if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidConfig, "sigma must be > 0");
    if (threads == 0) throw Error(ErrorKind::InvalidConfig, "threads must be >= 1");
}

DgpSpec dgp_for(const ExperimentSpec& spec, std::size_t replication) {
    DgpSpec d;
    d.length = spec.T;
    d.seed = spec.seed_base + replication;
    const bool hq = spec.hypothesis == Hypothesis::HQ;
    switch (spec.example) {
        case Example::UnitRootVsAr1:
            d.kind = Ar1Dgp{hq ? 1.0 : 0.90, spec.sigma};
            break;
        case Example::Ar2VsArma21:
            d.kind = hq ? Arma21Dgp{1.4, -0.6, 0.285, spec.sigma} : Arma21Dgp{1.50, -0.70, 0.0, spec.sigma};
            break;
        case Example::ComboEqualVsOptimal:
            d.kind = ComboDgp{hq ? 0.5 : 0.25, spec.sigma};
            break;
    }
    return d;
}

Boundaries boundaries_for(const ExperimentSpec& spec) {
    return spec.k_u_mode == KuMode::PaperOverride ? modified_boundary(spec.beta, kPublishedUpperBoundary)
                                                  : modified_boundary(spec.beta);
}

namespace {

struct MethodPair {
    FittedMethod q;
    FittedMethod p;
};

MethodPair fit_methods(const ExperimentSpec& spec, const SimulatedSeries& s, Window w) {
    switch (spec.example) {
        case Example::UnitRootVsAr1:
            return {fit_random_walk_drift(s.y, w), fit_ar(1, s.y, w, {.enforce_stationarity = true})};
        case Example::Ar2VsArma21:
            return {fit_arma21_css(s.y, w), fit_ar(2, s.y, w)};
        case Example::ComboEqualVsOptimal:
            return {fit_combination(s.y, s.x1, s.x2, w, ComboMode::Equal),
                    fit_combination(s.y, s.x1, s.x2, w, ComboMode::Optimal)};
    }
    throw Error(ErrorKind::InvalidConfig, "unknown example");
}

RegressorRow regressors_at(const SimulatedSeries& s, std::size_t t) {
    if (s.x1.empty()) return {};
    return {s.x1[t], s.x2[t]};
}

}  // namespace

ReplicationScores replication_scores(const ExperimentSpec& spec, std::size_t replication) {
    spec.validate();
    const SimulatedSeries series = simulate(dgp_for(spec, replication));
    const std::span<const double> y = series.y;
    MethodPair methods = fit_methods(spec, series, Window{0, spec.R});

    ReplicationScores out;
    OneStepForecaster fq(methods.q), fp(methods.p);
    const std::size_t warmup = std::max(fq.min_history(), fp.min_history());
    double in_sample = 0.0;
    for (std::size_t t = 0; t < spec.R; ++t) {
        if (t >= warmup) {
            const RegressorRow x = regressors_at(series, t);
            in_sample += score(spec.score, fq.predict(x), y[t]) - score(spec.score, fp.predict(x), y[t]);
            out.in_sample_delta.push_back(in_sample);
        }
        fq.observe(y[t]);
        fp.observe(y[t]);
    }

    out.score_q.reserve(spec.T - spec.R);
    out.score_p.reserve(spec.T - spec.R);
    for (std::size_t t = spec.R; t < spec.T; ++t) {
        const RegressorRow x = regressors_at(series, t);
        if (spec.window == WindowScheme::Fixed) {
            out.score_q.push_back(score(spec.score, fq.predict(x), y[t]));
            out.score_p.push_back(score(spec.score, fp.predict(x), y[t]));
            fq.observe(y[t]);
            fp.observe(y[t]);
        } else {
            const Window w = spec.window == WindowScheme::Rolling ? Window{t - spec.R, t} : Window{0, t};
            const MethodPair refit = fit_methods(spec, series, w);
            const auto history = y.subspan(0, t);
            out.score_q.push_back(score(spec.score, forecast_one_step(refit.q, history, x), y[t]));
            out.score_p.push_back(score(spec.score, forecast_one_step(refit.p, history, x), y[t]));
        }
    }
    out.method_q = std::move(methods.q);
    out.method_p = std::move(methods.p);
    return out;
}

std::uint64_t checksum(std::span<const double> values) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : values) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

ReplicationRecord run_replication(const ExperimentSpec& spec, std::size_t replication) {
    ReplicationRecord rec;
    rec.index = replication;
    ReplicationScores scores;
    try {
        scores = replication_scores(spec, replication);
    } catch (const Error& e) {
        rec.fit_failed = true;
        rec.failure = e.what();
        return rec;
    }

    const ScoreDiffSeries all = score_diff_series(scores.score_q, scores.score_p);
    const std::span<const double> diffs = all.diffs;
    const auto tail = diffs.subspan(diffs.size() - spec.N);
    rec.dm_tail_checksum = checksum(tail);

    try {
        const DmResult dm = dm_test_diffs(diffs, spec.beta);
        rec.dm_statistic = dm.statistic;
        rec.dm_reject = dm.reject;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateVariance) throw;
        rec.dm_degenerate = true;
    }

    const ScoreDiffSeries window = ScoreDiffSeries::from_diffs({tail.begin(), tail.end()});
    rec.ssre_checksum = checksum(window.diffs);
    const SsreOutcome outcome = run_mean_evalue_test(window.cumsum, spec.rates, boundaries_for(spec));
    rec.decision = outcome.decision;
    rec.stopping_time = outcome.stopping_time;
    rec.ssre_log_stat = outcome.crossing_log_value;
    rec.ssre_reject = outcome.decision == Decision::SelectP;
    return rec;
}

McReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    McReport report;
    report.spec = spec;
    report.bounds = boundaries_for(spec);
    report.records.resize(spec.M);

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t r = next++; r < spec.M; r = next++) report.records[r] = run_replication(spec, r);
    };
    const unsigned n_threads = std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.M));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }

    std::size_t ssre_hits = 0, dm_hits = 0, truncated = 0;
    std::vector<std::size_t> stops;
    stops.reserve(spec.M);
    for (const auto& rec : report.records) {
        ssre_hits += rec.ssre_reject ? 1 : 0;
        dm_hits += rec.dm_reject ? 1 : 0;
        report.fit_failures += rec.fit_failed ? 1 : 0;
        if (!rec.fit_failed) {
            stops.push_back(rec.stopping_time);
            truncated += rec.decision == Decision::TruncatedSelectQ ? 1 : 0;
        }
    }
    const double m = static_cast<double>(spec.M);
    report.ssre_reject_freq = static_cast<double>(ssre_hits) / m;
    report.dm_reject_freq = static_cast<double>(dm_hits) / m;
    report.mcse = std::sqrt(report.ssre_reject_freq * (1.0 - report.ssre_reject_freq) / m);
    report.dm_mcse = std::sqrt(report.dm_reject_freq * (1.0 - report.dm_reject_freq) / m);
    if (stops.size() >= 100) report.stopping_summary = stopping_time_stats(stops, truncated);
    return report;
}

const std::vector<PublishedCell>& published_table1() {
    using E = Example;
    using H = Hypothesis;
    static const std::vector<PublishedCell> cells = {
        {E::UnitRootVsAr1, ScoreKind::Mse, H::HQ, 0.010, 0.003},
        {E::UnitRootVsAr1, ScoreKind::Mse, H::HP, 0.950, 0.810},
        {E::Ar2VsArma21, ScoreKind::Mse, H::HQ, 0.007, 0.001},
        {E::Ar2VsArma21, ScoreKind::Mse, H::HP, 0.012, 0.003},
        {E::ComboEqualVsOptimal, ScoreKind::Mse, H::HQ, 0.050, 0.020},
        {E::ComboEqualVsOptimal, ScoreKind::Mse, H::HP, 0.470, 0.460},
        {E::UnitRootVsAr1, ScoreKind::LogScore, H::HQ, 0.001, 0.001},
        {E::UnitRootVsAr1, ScoreKind::LogScore, H::HP, 1.000, 1.000},
        {E::Ar2VsArma21, ScoreKind::LogScore, H::HQ, 0.050, 0.001},
        {E::Ar2VsArma21, ScoreKind::LogScore, H::HP, 0.001, 0.200},
    };
    return cells;
}

Table1 replicate_table1(const ExperimentSpec& base) {
    Table1 table;
    table.seed_base = base.seed_base;
    for (const PublishedCell& pub : published_table1()) {
        ExperimentSpec spec = base;
        spec.example = pub.example;
        spec.score = pub.score;
        spec.hypothesis = pub.hypothesis;
        table.cells.push_back({pub.example, pub.score, pub.hypothesis, pub.ssre, pub.dm, run_experiment(spec)});
    }
    return table;
}

std::string format_table1(const Table1& table) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-5s %-3s %9s %9s %9s %9s %6s\n", "example", "score", "hyp", "ssre",
                  "ssre_pub", "dm", "dm_pub", "fails");
    os << line;
    for (const auto& c : table.cells) {
        std::snprintf(line, sizeof line, "%-20s %-5s %-3s %9.3f %9.3f %9.3f %9.3f %6zu\n",
                      std::string(to_string(c.example)).c_str(), std::string(to_string(c.score)).c_str(),
                      std::string(to_string(c.hypothesis)).c_str(), c.report.ssre_reject_freq, c.published_ssre,
                      c.report.dm_reject_freq, c.published_dm, c.report.fit_failures);
        os << line;
    }
    return os.str();
}

}  // namespace ssre
