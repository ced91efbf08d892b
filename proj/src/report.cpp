#include "ssre/report.hpp"

#include <cmath>
#include <string>
#include <variant>

namespace ssre {

using nlohmann::json;

namespace {

// JSON has no inf/nan; emit null for those.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string str(std::string_view s) { return std::string(s); }

json coeffs_json(const RegressionCoeffs& c) { return json::array({num(c[0]), num(c[1])}); }

}  // namespace

json versioned(json j) {
    j["schema_version"] = kSchemaVersion;
    return j;
}

json to_json(const Boundaries& b) {
    json j = {{"k_l", num(b.k_l)},         {"k_u", num(b.k_u)},
              {"log_k_l", num(b.log_k_l)}, {"log_k_u", num(b.log_k_u)},
              {"scheme", str(to_string(b.scheme))}};
    j["beta"] = b.beta ? num(*b.beta) : json(nullptr);
    return j;
}

json to_json(const SsreOutcome& o, bool include_path) {
    json j = {{"decision", str(to_string(o.decision))},
              {"stopping_time", o.stopping_time},
              {"truncated", o.truncated},
              {"tie_break", o.tie_break},
              {"crossing_log_value", num(o.crossing_log_value)}};
    if (include_path) {
        json path = json::array();
        for (double v : o.path) path.push_back(num(v));
        j["path"] = std::move(path);
    }
    return j;
}

json to_json(const DmResult& r) {
    return {{"statistic", num(r.statistic)},     {"mean_diff", num(r.mean_diff)},
            {"hac_variance", num(r.hac_variance)}, {"bandwidth", r.bandwidth},
            {"sample_size", r.sample_size},      {"critical_value", num(r.critical_value)},
            {"level", num(r.level)},             {"reject", r.reject}};
}

json to_json(const StoppingTimeStats& s) {
    json moments = json::array();
    for (double m : s.raw_moments) moments.push_back(num(m));
    return {{"count", s.count},
            {"mean", num(s.mean)},
            {"variance", num(s.variance)},
            {"max", s.max},
            {"truncation_frequency", num(s.truncation_frequency)},
            {"raw_moments", std::move(moments)},
            {"tail_slope", num(s.tail_slope)},
            {"tail_r2", num(s.tail_r2)},
            {"tail_points", s.tail_points}};
}

json to_json(const FittedMethod& m) {
    json j = {{"name", m.name()},
              {"sigma2", num(m.sigma2())},
              {"fit_window", {{"begin", m.fit_window.begin}, {"end", m.fit_window.end}}}};
    json params = std::visit(
        [](const auto& k) -> json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, RandomWalkDrift>) {
                return {{"mu", num(k.mu)}};
            } else if constexpr (std::is_same_v<T, ArModel>) {
                json c = json::array();
                for (double v : k.coeffs) c.push_back(num(v));
                return {{"intercept", num(k.intercept)}, {"coeffs", std::move(c)}};
            } else if constexpr (std::is_same_v<T, Arma21Model>) {
                return {{"intercept", num(k.intercept)},
                        {"rho1", num(k.rho1)},
                        {"rho2", num(k.rho2)},
                        {"theta", num(k.theta)}};
            } else if constexpr (std::is_same_v<T, ComboEqual>) {
                return {{"beta1", coeffs_json(k.beta1)}, {"beta2", coeffs_json(k.beta2)}, {"weight", 0.5}};
            } else {
                return {{"beta1", coeffs_json(k.beta1)},
                        {"beta2", coeffs_json(k.beta2)},
                        {"weight", num(k.weight_hat)},
                        {"degenerate", k.degenerate}};
            }
        },
        m.kind);
    j["params"] = std::move(params);
    return j;
}

json to_json(const ScreenReport& r) {
    json rates = json::array();
    for (const auto& w : r.omega_rates) rates.push_back(w.value());
    json stats = json::array();
    for (const auto& row : r.log_stats) {
        json a = json::array();
        for (double v : row) a.push_back(num(v));
        stats.push_back(std::move(a));
    }
    return {{"verdict", str(to_string(r.verdict))},
            {"omega_rates", std::move(rates)},
            {"min_correlation", num(r.min_correlation)},
            {"signs_agree", r.signs_agree},
            {"correlation_threshold", num(r.correlation_threshold)},
            {"log_stats", std::move(stats)}};
}

json to_json(const ExperimentSpec& s) {
    json rates = json::array();
    for (const auto& w : s.rates) rates.push_back(w.value());
    return {{"example", str(to_string(s.example))},
            {"hypothesis", str(to_string(s.hypothesis))},
            {"score", str(to_string(s.score))},
            {"T", s.T},
            {"R", s.R},
            {"N", s.N},
            {"M", s.M},
            {"beta", num(s.beta)},
            {"k_u_mode", str(to_string(s.k_u_mode))},
            {"rates", std::move(rates)},
            {"seed_base", s.seed_base},
            {"sigma", num(s.sigma)},
            {"window", str(to_string(s.window))},
            {"threads", s.threads}};
}

json to_json(const ReplicationRecord& r) {
    json j = {{"index", r.index},
              {"decision", str(to_string(r.decision))},
              {"stopping_time", r.stopping_time},
              {"ssre_log_stat", num(r.ssre_log_stat)},
              {"dm_statistic", num(r.dm_statistic)},
              {"ssre_reject", r.ssre_reject},
              {"dm_reject", r.dm_reject},
              {"dm_degenerate", r.dm_degenerate},
              {"fit_failed", r.fit_failed},
              {"ssre_checksum", r.ssre_checksum},
              {"dm_tail_checksum", r.dm_tail_checksum}};
    if (r.fit_failed) j["failure"] = r.failure;
    return j;
}

json to_json(const McReport& r, bool include_records) {
    json j = {{"spec", to_json(r.spec)},
              {"boundaries", to_json(r.bounds)},
              {"ssre_reject_freq", num(r.ssre_reject_freq)},
              {"dm_reject_freq", num(r.dm_reject_freq)},
              {"mcse", num(r.mcse)},
              {"dm_mcse", num(r.dm_mcse)},
              {"fit_failures", r.fit_failures}};
    j["stopping_summary"] = r.stopping_summary ? to_json(*r.stopping_summary) : json(nullptr);
    if (include_records) {
        json recs = json::array();
        for (const auto& rec : r.records) recs.push_back(to_json(rec));
        j["records"] = std::move(recs);
    }
    return j;
}

json to_json(const Table1& t) {
    json cells = json::array();
    for (const auto& c : t.cells) {
        cells.push_back({{"example", str(to_string(c.example))},
                         {"score", str(to_string(c.score))},
                         {"hypothesis", str(to_string(c.hypothesis))},
                         {"published_ssre", num(c.published_ssre)},
                         {"published_dm", num(c.published_dm)},
                         {"ssre_reject_freq", num(c.report.ssre_reject_freq)},
                         {"dm_reject_freq", num(c.report.dm_reject_freq)},
                         {"mcse", num(c.report.mcse)},
                         {"dm_mcse", num(c.report.dm_mcse)},
                         {"fit_failures", c.report.fit_failures},
                         {"M", c.report.spec.M}});
    }
    return {{"seed_base", t.seed_base}, {"cells", std::move(cells)}};
}

}  // namespace ssre
