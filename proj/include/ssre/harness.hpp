#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssre/dmtest.hpp"
#include "ssre/eprocess.hpp"
#include "ssre/scoring.hpp"
#include "ssre/sequential.hpp"
#include "ssre/tsmodels.hpp"

namespace ssre {

/// The three simulation designs. Q is always the benchmark method.
///   UnitRootVsAr1:      Q random walk with drift, P AR(1) with intercept.
///   Ar2VsArma21:        Q ARMA(2,1) by CSS, P AR(2) with intercept.
///   ComboEqualVsOptimal: Q equal-weight combination, P optimal weight.
enum class Example { UnitRootVsAr1, Ar2VsArma21, ComboEqualVsOptimal };

/// HQ draws data where Q is the more accurate method, HP where P is.
enum class Hypothesis { HQ, HP };

enum class KuMode { Formula, PaperOverride };

enum class WindowScheme { Fixed, Rolling, Expanding };

std::string_view to_string(Example e) noexcept;
std::string_view to_string(Hypothesis h) noexcept;
std::string_view to_string(KuMode m) noexcept;
std::string_view to_string(WindowScheme w) noexcept;
Example example_from_string(std::string_view s);
Hypothesis hypothesis_from_string(std::string_view s);
KuMode ku_mode_from_string(std::string_view s);
WindowScheme window_scheme_from_string(std::string_view s);

struct ExperimentSpec {
    Example example = Example::UnitRootVsAr1;
    Hypothesis hypothesis = Hypothesis::HQ;
    ScoreKind score = ScoreKind::Mse;
    std::size_t T = 1000;  // total observations per replication
    std::size_t R = 500;   // in-sample fit length
    std::size_t N = 100;   // evaluation window for the sequential test (last N test points)
    std::size_t M = 1000;  // replications
    double beta = 0.1;
    KuMode k_u_mode = KuMode::PaperOverride;
    std::vector<OmegaRate> rates = default_rates();
    std::uint64_t seed_base = 0;
    double sigma = 2.0;
    WindowScheme window = WindowScheme::Fixed;
    unsigned threads = 1;

    void validate() const;
};

/// DGP of replication r: seed = seed_base + r.
DgpSpec dgp_for(const ExperimentSpec& spec, std::size_t replication);

Boundaries boundaries_for(const ExperimentSpec& spec);

/// Out-of-sample scores for all T-R test points, plus the in-sample
/// differential path used for learning-rate screening.
struct ReplicationScores {
    std::vector<double> score_q;
    std::vector<double> score_p;
    std::vector<double> in_sample_delta;  // cumulative in-sample differentials
    FittedMethod method_q;
    FittedMethod method_p;
};

/// Throws on fit failure.
ReplicationScores replication_scores(const ExperimentSpec& spec, std::size_t replication);

struct ReplicationRecord {
    std::size_t index = 0;
    Decision decision = Decision::SelectQ;
    std::size_t stopping_time = 0;
    double ssre_log_stat = 0.0;  // log of the monitored average at stopping
    double dm_statistic = 0.0;
    bool ssre_reject = false;
    bool dm_reject = false;
    bool dm_degenerate = false;
    bool fit_failed = false;
    std::string failure;
    std::uint64_t ssre_checksum = 0;     // over the differentials fed to the sequential test
    std::uint64_t dm_tail_checksum = 0;  // over the last N differentials fed to DM
};

ReplicationRecord run_replication(const ExperimentSpec& spec, std::size_t replication);

struct McReport {
    ExperimentSpec spec;
    Boundaries bounds;
    double ssre_reject_freq = 0.0;
    double dm_reject_freq = 0.0;
    double mcse = 0.0;     // of ssre_reject_freq
    double dm_mcse = 0.0;
    std::size_t fit_failures = 0;
    std::optional<StoppingTimeStats> stopping_summary;  // needs M >= 100
    std::vector<ReplicationRecord> records;
};

/// Deterministic in spec (independent of spec.threads).
McReport run_experiment(const ExperimentSpec& spec);

struct Table1Cell {
    Example example;
    ScoreKind score;
    Hypothesis hypothesis;
    double published_ssre;
    double published_dm;
    McReport report;
};

struct Table1 {
    std::uint64_t seed_base = 0;
    std::vector<Table1Cell> cells;
};

struct PublishedCell {
    Example example;
    ScoreKind score;
    Hypothesis hypothesis;
    double ssre;
    double dm;
};

/// The ten design cells of the published comparison (the combination design
/// has no log-score cells).
const std::vector<PublishedCell>& published_table1();

/// Runs every published cell with `base` as the template for T, R, N, M,
/// beta, rates, sigma and threads.
Table1 replicate_table1(const ExperimentSpec& base);

std::string format_table1(const Table1& table);

/// FNV-1a over the IEEE-754 bit patterns.
std::uint64_t checksum(std::span<const double> values) noexcept;

}  // namespace ssre
