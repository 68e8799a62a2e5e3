// frogsim: classify, simulate, sweep-phase, oracle-check.
// Exit status: 0 decisive, 2 inconclusive, 1 error.

#include "frog/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <limits>

int main(int argc, char** argv) {
    using namespace frog;
    CLI::App app{"Frog model classifier and simulator"};
    app.require_subcommand(1);

    std::string model_path, json_out;
    ClassifyOptions copts;
    auto* classify = app.add_subcommand("classify", "Classify a model file and print the verdict");
    classify->add_option("model", model_path, "Model file (JSON, schema frog-model/1)")->required();
    classify->add_option("--json", json_out, "Write the verdict record here");
    classify->add_option("--max-block", copts.max_block_size, "Largest block size tried")->check(CLI::PositiveNumber);

    SimConfig cfg;
    std::string prefix = "frogsim";
    auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo trials and write CSV/JSON reports");
    simulate->add_option("model", model_path, "Model file")->required();
    simulate->add_option("--out", prefix, "Output prefix");
    simulate->add_option("--site-horizon", cfg.site_horizon);
    simulate->add_option("--time-horizon", cfg.time_horizon);
    simulate->add_option("--replications", cfg.replications);
    simulate->add_option("--seed", cfg.rng_seed);
    simulate->add_option("--visits", cfg.origin_visit_target, "K in the local-survival proxy");
    simulate->add_option("--front-fraction", cfg.front_fraction);
    simulate->add_option("--escape-tolerance", cfg.escape_tolerance);
    simulate->add_option("--threads", cfg.threads);
    simulate->add_flag("--trajectory", cfg.record_trajectory, "Write the activation front of the first trial");

    cli::SweepOptions sweep;
    std::string side = "left", grid_out = "-";
    bool no_inf = false;
    auto* sweep_cmd = app.add_subcommand("sweep-phase", "Power-law phase grid as CSV");
    sweep_cmd->add_option("--alpha-min", sweep.alpha_lo);
    sweep_cmd->add_option("--alpha-max", sweep.alpha_hi);
    sweep_cmd->add_option("--beta-min", sweep.beta_lo);
    sweep_cmd->add_option("--beta-max", sweep.beta_hi);
    sweep_cmd->add_option("--step", sweep.step, "Grid resolution");
    sweep_cmd->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
    sweep_cmd->add_flag("--no-infinite-beta", no_inf, "Omit the immortal column");
    sweep_cmd->add_option("--overlay-every", sweep.overlay_every, "Simulate every k-th grid point");
    sweep_cmd->add_option("--overlay-replications", sweep.overlay_config.replications);
    sweep_cmd->add_option("--out", grid_out, "CSV path, '-' for stdout");

    cli::OracleCheckOptions oopts;
    auto* oracle = app.add_subcommand("oracle-check", "Closed forms and simulator against brute-force oracles");
    oracle->add_flag("--mutate-radicand", oopts.mutate_radicand, "Test mode: use a closed form with a wrong-sign radicand");
    oracle->add_flag("--empty-grid", oopts.empty_grid, "Run no cases");
    oracle->add_option("--horizon", oopts.horizon, "DP horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kExitError;
    }

    try {
        if (*classify) return cli::cmd_classify(model_path, json_out, std::cout, copts);
        if (*simulate) return cli::cmd_simulate(model_path, cfg, prefix, std::cout);
        if (*sweep_cmd) {
            sweep.side = side == "left" ? DriftSide::Left : DriftSide::Right;
            sweep.include_infinite_beta = !no_inf;
            return cli::cmd_sweep_phase(sweep, grid_out, std::cout);
        }
        if (*oracle) return cli::cmd_oracle_check(oopts, std::cout);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return cli::kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitError;
    }
    return cli::kExitError;
}
