#include "ssre/dmtest.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "ssre/error.hpp"

namespace ssre {

HacEstimate hac_variance(std::span<const double> d, std::size_t bandwidth) {
    const std::size_t p = d.size();
    if (p < bandwidth + 2) {
        throw Error(ErrorKind::InsufficientData, "HAC variance needs at least bandwidth + 2 observations");
    }
    double mean = 0.0;
    for (double v : d) {
        if (!std::isfinite(v)) throw Error(ErrorKind::NumericalError, "non-finite loss differential");
        mean += v;
    }
    mean /= static_cast<double>(p);

    const auto autocov = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t t = lag; t < p; ++t) acc += (d[t] - mean) * (d[t - lag] - mean);
        return acc / static_cast<double>(p);
    };

    HacEstimate out;
    double v = autocov(0);
    const double denom = static_cast<double>(bandwidth + 1);
    for (std::size_t lag = 1; lag <= bandwidth; ++lag) {
        v += 2.0 * (1.0 - static_cast<double>(lag) / denom) * autocov(lag);
    }
    if (v < 0.0) {
        v = 0.0;
        out.clamped = true;
    }
    out.variance = v;
    out.degenerate = v == 0.0;
    return out;
}

std::size_t default_bandwidth(std::size_t p) {
    return static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(p) / 100.0, 2.0 / 9.0)));
}

double normal_quantile(double prob) {
    if (!(prob > 0.0 && prob < 1.0)) throw Error(ErrorKind::InvalidConfig, "quantile level must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

DmResult dm_test_diffs(std::span<const double> d, double level, std::optional<std::size_t> bandwidth) {
    if (d.size() < 10) throw Error(ErrorKind::InsufficientData, "DM test needs at least 10 observations");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::InvalidConfig, "DM level must lie in (0, 1)");
    DmResult r;
    r.sample_size = d.size();
    r.level = level;
    r.bandwidth = bandwidth.value_or(default_bandwidth(d.size()));
    const HacEstimate hac = hac_variance(d, r.bandwidth);
    double mean = 0.0;
    for (double v : d) mean += v;
    r.mean_diff = mean / static_cast<double>(d.size());
    r.hac_variance = hac.variance;
    if (hac.degenerate) {
        throw Error(ErrorKind::DegenerateVariance, "HAC variance of the loss differential is zero");
    }
    r.statistic = std::sqrt(static_cast<double>(d.size())) * r.mean_diff / std::sqrt(hac.variance);
    r.critical_value = normal_quantile(1.0 - level);
    r.reject = r.statistic > r.critical_value;
    return r;
}

DmResult dm_test(std::span<const double> loss_q, std::span<const double> loss_p, double level,
                 std::optional<std::size_t> bandwidth) {
    if (loss_q.size() != loss_p.size()) throw Error(ErrorKind::ShapeError, "loss sequences differ in length");
    std::vector<double> d(loss_q.size());
    for (std::size_t t = 0; t < d.size(); ++t) d[t] = loss_q[t] - loss_p[t];
    return dm_test_diffs(d, level, bandwidth);
}

}  // namespace ssre
