// Command-line front end: simulation, sequential tests on score CSVs,
// Diebold-Mariano, learning-rate screening, and the Monte Carlo study.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ssre/error.hpp"
#include "ssre/io.hpp"
#include "ssre/report.hpp"

namespace {

using namespace ssre;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;  // empty: stdout
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "Flat key = value experiment configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Seed base (overrides seed_base from the config)");
    cmd->add_option("-o,--out", c.out, "Output file (default: stdout)");
}

ExperimentSpec resolve_spec(const Common& c) {
    ExperimentSpec spec = c.config.empty() ? ExperimentSpec{} : load_config(c.config);
    if (c.seed) spec.seed_base = *c.seed;
    return spec;
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + c.out);
    f << text;
}

void emit_json(const Common& c, const nlohmann::json& j) { emit(c, versioned(j).dump(2) + "\n"); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential scoring-rule evaluation of competing forecasters"};
    app.require_subcommand(1);

    Common sim_c, run_c, ev_c, dm_c, scr_c, tab_c, plan_c, exp_c;

    auto* sim = app.add_subcommand("simulate", "Simulate one replication of a design to CSV");
    add_common(sim, sim_c);
    std::size_t sim_rep = 0;
    sim->add_option("--replication", sim_rep, "Replication index (seed = seed_base + index)");

    std::string scores_path;
    auto add_scores = [&](CLI::App* cmd) {
        cmd->add_option("--scores", scores_path, "CSV with header t,score_q,score_p or t,d")
            ->required()
            ->check(CLI::ExistingFile);
    };

    auto* run = app.add_subcommand("ssre-run", "First-exit boundary test on the cumulative score ratio");
    add_common(run, run_c);
    add_scores(run);
    std::string scheme = "two-sided";
    double run_omega = 1.0;
    std::optional<std::size_t> n_max;
    run->add_option("--scheme", scheme, "two-sided or modified")->check(CLI::IsMember({"two-sided", "modified"}));
    run->add_option("--omega", run_omega, "Learning rate for two-sided boundaries");
    run->add_option("--n-max", n_max, "Truncation horizon (default: series length)");

    auto* ev = app.add_subcommand("evalue-test", "Averaged ordered e-value test over the configured rates");
    add_common(ev, ev_c);
    add_scores(ev);

    auto* dm = app.add_subcommand("dm-run", "One-sided Diebold-Mariano test with Newey-West variance");
    add_common(dm, dm_c);
    add_scores(dm);
    std::optional<double> dm_level;
    std::optional<std::size_t> dm_bw;
    dm->add_option("--level", dm_level, "Test level (default: beta from the config)");
    dm->add_option("--bandwidth", dm_bw, "Bartlett bandwidth (default: floor(4 (P/100)^(2/9)))");

    auto* scr = app.add_subcommand("omega-screen", "Compare e-statistic trajectories across learning rates");
    add_common(scr, scr_c);
    add_scores(scr);
    double scr_threshold = 0.9;
    scr->add_option("--threshold", scr_threshold, "Minimum pairwise correlation for SIMILAR");

    auto* tab = app.add_subcommand("replicate-table1", "Run every published design cell");
    add_common(tab, tab_c);
    std::string tab_json;
    tab->add_option("--json", tab_json, "Also write the table as JSON to this file");

    auto* plan = app.add_subcommand("plan-n", "Markov-bound planner for the data horizon");
    add_common(plan, plan_c);
    double plan_e = 0.0, plan_p = 0.0;
    plan->add_option("--expected-stop", plan_e, "Expected stopping time E[N]")->required();
    plan->add_option("--prob", plan_p, "Target probability that the test stops within n")->required();

    auto* ex = app.add_subcommand("run-experiment", "Monte Carlo study of one design cell");
    add_common(ex, exp_c);
    bool with_records = false;
    ex->add_flag("--records", with_records, "Include per-replication records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sim) {
            const ExperimentSpec spec = resolve_spec(sim_c);
            spec.validate();
            emit(sim_c, series_to_csv(simulate(dgp_for(spec, sim_rep))));
        } else if (*run) {
            const ExperimentSpec spec = resolve_spec(run_c);
            const ScoreDiffSeries s = ingest_scores(scores_path);
            const Boundaries b = scheme == "modified" ? boundaries_for(spec)
                                                      : boundaries_from_beta(spec.beta, OmegaRate(run_omega));
            nlohmann::json j = to_json(run_ssre(s.cumsum, b, n_max));
            j["boundaries"] = to_json(b);
            emit_json(run_c, j);
        } else if (*ev) {
            const ExperimentSpec spec = resolve_spec(ev_c);
            const ScoreDiffSeries s = ingest_scores(scores_path);
            const Boundaries b = boundaries_for(spec);
            nlohmann::json j = to_json(run_mean_evalue_test(s.cumsum, spec.rates, b));
            j["boundaries"] = to_json(b);
            emit_json(ev_c, j);
        } else if (*dm) {
            const ExperimentSpec spec = resolve_spec(dm_c);
            const ScoreDiffSeries s = ingest_scores(scores_path);
            emit_json(dm_c, to_json(dm_test_diffs(s.diffs, dm_level.value_or(spec.beta), dm_bw)));
        } else if (*scr) {
            const ExperimentSpec spec = resolve_spec(scr_c);
            const ScoreDiffSeries s = ingest_scores(scores_path);
            const ScreenReport r = omega_screen(s.cumsum, spec.rates, scr_threshold);
            std::cerr << "verdict: " << to_string(r.verdict) << "\n";
            emit(scr_c, r.to_csv());
        } else if (*tab) {
            const ExperimentSpec spec = resolve_spec(tab_c);
            spec.validate();
            const Table1 t = replicate_table1(spec);
            emit(tab_c, format_table1(t));
            if (!tab_json.empty()) {
                std::ofstream f(tab_json, std::ios::binary);
                if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + tab_json);
                f << versioned(to_json(t)).dump(2) << "\n";
            }
        } else if (*plan) {
            const std::uint64_t n = min_sample_size(plan_e, plan_p);
            emit_json(plan_c, {{"expected_stop", plan_e}, {"target_prob", plan_p}, {"n", n}});
        } else if (*ex) {
            const ExperimentSpec spec = resolve_spec(exp_c);
            emit_json(exp_c, to_json(run_experiment(spec), with_records));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_numerical(e.kind()) ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
