#include "ssre/eprocess.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

#include "ssre/error.hpp"
#include "ssre/numeric.hpp"

namespace ssre {

OmegaRate::OmegaRate(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::InvalidConfig, "learning rate must be finite and > 0");
    }
}

std::vector<OmegaRate> default_rates() { return {OmegaRate(0.25), OmegaRate(0.5), OmegaRate(1.0)}; }

CumulativeRatio cumulative_ratio(const ScoreDiffSeries& series) {
    if (series.size() == 0) throw Error(ErrorKind::ShapeError, "empty score differential series");
    CumulativeRatio out;
    out.log_c = series.cumsum;
    out.c.reserve(out.log_c.size());
    for (double v : out.log_c) out.c.push_back(exp_checked(v, out.overflowed));
    return out;
}

double e_stat(double omega, double delta) {
    if (!(omega >= 0.0) || !std::isfinite(omega) || !std::isfinite(delta)) {
        throw Error(ErrorKind::NumericalError, "e_stat needs finite omega >= 0 and finite delta");
    }
    if (omega == 0.0) return 1.0;
    return std::exp(omega * delta);
}

std::vector<double> ordered_scaled_evalues(std::span<const double> e) {
    for (double v : e) {
        if (!(v >= 0.0)) throw Error(ErrorKind::InvalidEValue, "e-values must be nonnegative");
    }
    std::vector<double> out(e.begin(), e.end());
    std::sort(out.begin(), out.end());
    const double n = static_cast<double>(out.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= static_cast<double>(j + 1) / n;
    return out;
}

namespace {

// log[(1/N) sum_j (j/N) exp(sorted_log[j-1])] for an ascending input.
double log_scaled_mean_sorted(std::span<const double> sorted_log, std::vector<double>& scratch) {
    const std::size_t n = sorted_log.size();
    scratch.resize(n);
    for (std::size_t j = 0; j < n; ++j) scratch[j] = std::log(static_cast<double>(j + 1)) + sorted_log[j];
    return log_sum_exp(scratch) - 2.0 * std::log(static_cast<double>(n));
}

}  // namespace

double log_mean_evalue(OmegaRate omega, std::span<const double> delta) {
    if (delta.empty()) throw Error(ErrorKind::ShapeError, "mean e-value needs at least one observation");
    std::vector<double> logs(delta.size());
    for (std::size_t j = 0; j < delta.size(); ++j) {
        if (!std::isfinite(delta[j])) throw Error(ErrorKind::NumericalError, "non-finite cumulative differential");
        logs[j] = omega.value() * delta[j];
    }
    std::sort(logs.begin(), logs.end());
    std::vector<double> scratch;
    return log_scaled_mean_sorted(logs, scratch);
}

double mean_evalue(OmegaRate omega, std::span<const double> delta) {
    return std::exp(log_mean_evalue(omega, delta));
}

double avg_over_rates(std::span<const double> per_rate_means) {
    if (per_rate_means.empty()) throw Error(ErrorKind::ShapeError, "no per-rate e-values to average");
    double acc = 0.0;
    for (double v : per_rate_means) acc += v;
    return acc / static_cast<double>(per_rate_means.size());
}

double log_avg_over_rates(std::span<const double> per_rate_log_means) {
    if (per_rate_log_means.empty()) throw Error(ErrorKind::ShapeError, "no per-rate e-values to average");
    return log_sum_exp(per_rate_log_means) - std::log(static_cast<double>(per_rate_log_means.size()));
}

EProcessState build_eprocess(std::span<const double> cumulative_delta, std::span<const OmegaRate> rates) {
    if (cumulative_delta.empty()) throw Error(ErrorKind::ShapeError, "empty cumulative differential path");
    if (rates.empty()) throw Error(ErrorKind::InvalidConfig, "at least one learning rate is required");
    for (double d : cumulative_delta) {
        if (!std::isfinite(d)) throw Error(ErrorKind::NumericalError, "non-finite cumulative differential");
    }
    const std::size_t n = cumulative_delta.size();
    EProcessState state;
    state.omega_rates.assign(rates.begin(), rates.end());
    state.log_e.resize(rates.size());
    state.log_mean_path.resize(rates.size());

    std::vector<double> sorted, scratch;
    for (std::size_t r = 0; r < rates.size(); ++r) {
        const double omega = rates[r].value();
        auto& log_e = state.log_e[r];
        auto& path = state.log_mean_path[r];
        log_e.resize(n);
        path.resize(n);
        sorted.clear();
        for (std::size_t j = 0; j < n; ++j) {
            log_e[j] = omega * cumulative_delta[j];
            sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), log_e[j]), log_e[j]);
            path[j] = log_scaled_mean_sorted(sorted, scratch);
        }
    }
    state.log_avg_path.resize(n);
    std::vector<double> column(rates.size());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < rates.size(); ++r) column[r] = state.log_mean_path[r][j];
        state.log_avg_path[j] = log_avg_over_rates(column);
    }
    return state;
}

std::string_view to_string(ScreenVerdict verdict) noexcept {
    switch (verdict) {
        case ScreenVerdict::Similar: return "SIMILAR";
        case ScreenVerdict::Dissimilar: return "DISSIMILAR";
        case ScreenVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

namespace {

// NaN when either input has zero variance.
double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

ScreenReport omega_screen(std::span<const double> in_sample_delta_path, std::span<const OmegaRate> rates,
                          double correlation_threshold) {
    if (in_sample_delta_path.size() < 10) {
        throw Error(ErrorKind::InsufficientData, "omega screening needs an in-sample path of length >= 10");
    }
    if (rates.empty()) throw Error(ErrorKind::InvalidConfig, "at least one learning rate is required");

    ScreenReport report;
    report.omega_rates.assign(rates.begin(), rates.end());
    report.correlation_threshold = correlation_threshold;
    const double terminal = in_sample_delta_path.back();
    const int terminal_sign = sign_of(terminal);
    for (const OmegaRate& w : rates) {
        std::vector<double> traj(in_sample_delta_path.size());
        for (std::size_t t = 0; t < traj.size(); ++t) {
            traj[t] = -w.value() * terminal_sign * in_sample_delta_path[t];
        }
        report.log_stats.push_back(std::move(traj));
    }

    const auto& first = report.log_stats.front();
    const bool constant = std::all_of(first.begin(), first.end(), [&](double v) { return v == first.front(); });
    if (constant) {
        report.verdict = ScreenVerdict::Inconclusive;
        return report;
    }

    const int ref_sign = sign_of(first.back());
    report.signs_agree = std::all_of(report.log_stats.begin(), report.log_stats.end(),
                                     [&](const auto& traj) { return sign_of(traj.back()) == ref_sign; });
    report.min_correlation = 1.0;
    for (std::size_t a = 0; a < report.log_stats.size(); ++a) {
        for (std::size_t b = a + 1; b < report.log_stats.size(); ++b) {
            const double rho = pearson(report.log_stats[a], report.log_stats[b]);
            if (std::isnan(rho)) {
                report.verdict = ScreenVerdict::Inconclusive;
                return report;
            }
            report.min_correlation = std::min(report.min_correlation, rho);
        }
    }
    report.verdict = report.signs_agree && report.min_correlation >= correlation_threshold
                         ? ScreenVerdict::Similar
                         : ScreenVerdict::Dissimilar;
    return report;
}

std::string ScreenReport::to_csv() const {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17);
    os << "t,rate,log_stat\n";
    for (std::size_t r = 0; r < omega_rates.size(); ++r) {
        for (std::size_t t = 0; t < log_stats[r].size(); ++t) {
            os << (t + 1) << ',' << omega_rates[r].value() << ',' << log_stats[r][t] << '\n';
        }
    }
    return os.str();
}

}  // namespace ssre
