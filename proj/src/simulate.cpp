#include <cmath>
#include <string>

#include "ssre/rng.hpp"
#include "ssre/tsmodels.hpp"

namespace ssre {

namespace {

struct DgpValidator {
    void operator()(const Ar1Dgp& d) const {
        if (!(d.sigma > 0.0) || !std::isfinite(d.sigma) || !std::isfinite(d.rho)) {
            throw Error(ErrorKind::InvalidConfig, "AR(1) DGP needs finite rho and sigma > 0");
        }
    }
    void operator()(const Arma21Dgp& d) const {
        if (!(d.sigma > 0.0) || !std::isfinite(d.sigma) || !std::isfinite(d.rho1) ||
            !std::isfinite(d.rho2) || !std::isfinite(d.theta)) {
            throw Error(ErrorKind::InvalidConfig, "ARMA(2,1) DGP needs finite parameters and sigma > 0");
        }
    }
    void operator()(const ComboDgp& d) const {
        if (!(d.sigma > 0.0) || !std::isfinite(d.sigma)) {
            throw Error(ErrorKind::InvalidConfig, "combination DGP needs sigma > 0");
        }
        if (!(d.combo_weight >= 0.0 && d.combo_weight <= 1.0)) {
            throw Error(ErrorKind::InvalidConfig, "combination weight must lie in [0, 1]");
        }
    }
};

SimulatedSeries simulate_ar1(const Ar1Dgp& d, std::size_t length, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    SimulatedSeries out;
    out.y.resize(length);
    if (std::abs(d.rho) < 1.0) {
        double prev = 0.0;
        for (std::size_t i = 0; i < kBurnIn; ++i) prev = d.rho * prev + d.sigma * rng.normal();
        for (std::size_t t = 0; t < length; ++t) {
            prev = d.rho * prev + d.sigma * rng.normal();
            out.y[t] = prev;
        }
    } else {
        out.y[0] = d.sigma * rng.normal();
        for (std::size_t t = 1; t < length; ++t) out.y[t] = d.rho * out.y[t - 1] + d.sigma * rng.normal();
    }
    return out;
}

SimulatedSeries simulate_arma21(const Arma21Dgp& d, std::size_t length, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    SimulatedSeries out;
    out.y.resize(length);
    double y1 = 0.0, y2 = 0.0, eps_prev = 0.0;
    const std::size_t total = kBurnIn + length;
    for (std::size_t i = 0; i < total; ++i) {
        const double eps = rng.normal();
        const double y = d.rho1 * y1 + d.rho2 * y2 + d.sigma * (eps + d.theta * eps_prev);
        y2 = y1;
        y1 = y;
        eps_prev = eps;
        if (i >= kBurnIn) out.y[i - kBurnIn] = y;
    }
    return out;
}

std::vector<double> ma2_indicator(CounterRng& rng, const std::array<double, 2>& ma, std::size_t length) {
    double lag2 = rng.normal();  // presample shocks, oldest first
    double lag1 = rng.normal();
    std::vector<double> x(length);
    for (std::size_t t = 0; t < length; ++t) {
        const double shock = rng.normal();
        x[t] = shock + ma[0] * lag1 + ma[1] * lag2;
        lag2 = lag1;
        lag1 = shock;
    }
    return x;
}

SimulatedSeries simulate_combo(const ComboDgp& d, std::size_t length, std::uint64_t seed) {
    CounterRng rng1(seed, 1), rng2(seed, 2), rng_y(seed, 3);
    SimulatedSeries out;
    out.x1 = ma2_indicator(rng1, kIndicator1Ma, length);
    out.x2 = ma2_indicator(rng2, kIndicator2Ma, length);
    out.y.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
        out.y[t] = d.combo_weight * out.x1[t] + (1.0 - d.combo_weight) * out.x2[t] +
                   d.sigma * rng_y.normal();
    }
    return out;
}

}  // namespace

void DgpSpec::validate() const {
    if (length < 10) throw Error(ErrorKind::InvalidConfig, "series length must be >= 10");
    std::visit(DgpValidator{}, kind);
}

SimulatedSeries simulate(const DgpSpec& spec) {
    spec.validate();
    return std::visit(
        [&](const auto& d) -> SimulatedSeries {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Ar1Dgp>) return simulate_ar1(d, spec.length, spec.seed);
            else if constexpr (std::is_same_v<T, Arma21Dgp>) return simulate_arma21(d, spec.length, spec.seed);
            else return simulate_combo(d, spec.length, spec.seed);
        },
        spec.kind);
}

}  // namespace ssre
