#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssre/harness.hpp"
#include "ssre/scoring.hpp"
#include "ssre/tsmodels.hpp"

namespace ssre {

/// Flat `key = value` configuration mirroring ExperimentSpec field names.
/// `#` starts a comment. Unknown keys and malformed values are InvalidConfig.
///
///   example   = UnitRootVsAr1 | Ar2VsArma21 | ComboEqualVsOptimal
///   hypothesis = HQ | HP
///   score     = log | mse
///   T, R, N, M, threads = positive integers
///   beta, sigma = reals
///   k_u_mode  = Formula | PaperOverride
///   rates     = comma-separated reals, e.g. 0.25,0.5,1
///   seed_base = unsigned 64-bit integer
///   window    = Fixed | Rolling | Expanding
ExperimentSpec parse_config(std::string_view text, ExperimentSpec base = {});
ExperimentSpec load_config(const std::filesystem::path& path, ExperimentSpec base = {});

std::vector<OmegaRate> parse_rates(std::string_view text);

/// Scores parsed from CSV with header `t,score_q,score_p` or `t,d`.
/// t must start anywhere and increase by exactly one per row.
struct ScoreTable {
    std::vector<long long> t;
    std::optional<std::vector<double>> score_q;
    std::optional<std::vector<double>> score_p;
    ScoreDiffSeries series;
};

ScoreTable parse_scores_csv(std::string_view text);
ScoreTable read_scores_csv(const std::filesystem::path& path);

/// Just the differential series of a scores CSV file.
ScoreDiffSeries ingest_scores(const std::filesystem::path& path);

/// Columns t,y (and x1,x2 for the combination design), t starting at 1.
std::string series_to_csv(const SimulatedSeries& s);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ssre
