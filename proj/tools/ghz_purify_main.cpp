// ghz-purify: scenario front end for the purification engines.
//
//   curves   exact comparison curves (yields/fidelities vs F0) as CSV
//   run      one scenario through the requested engines with cross-checks
//   explain  full branch log of the enumeration engine
//   mc       Monte Carlo sweep as CSV with standard-error columns
//
// Flags override values from --config. Worker count is capped by the
// GHZ_PURIFY_THREADS environment variable.

#include "ghzpurify/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
    std::string config;
    std::string protocol, engines, f_list, out;
    std::string f0, p, q, p0, pair_f0, ensemble_file, sweep;
    int n = -1;
    int64_t trials = -1;
    int64_t seed = -1;
};

void add_common(CLI::App* app, CommonArgs& args) {
    app->add_option("--config", args.config, "scenario config file (key = value lines)");
    app->add_option("--protocol", args.protocol,
                    "conventional | recycling | link | phaseflip | full-mepp");
    app->add_option("--engines", args.engines, "comma list of analytic,enumerate,montecarlo");
    app->add_option("--n", args.n, "photon count");
    app->add_option("--f0", args.f0, "symmetric-noise fidelity (rational or decimal)");
    app->add_option("--f", args.f_list, "comma list of GHZ weights");
    app->add_option("--p", args.p, "per-photon bit-flip rate");
    app->add_option("--q", args.q, "per-photon phase-flip rate");
    app->add_option("--p0", args.p0, "phase ensemble weight of Psi+");
    app->add_option("--pair-f0", args.pair_f0, "pair fidelity for the link protocol");
    app->add_option("--ensemble", args.ensemble_file, "ensemble file path");
    app->add_option("--sweep", args.sweep, "start:stop:steps sweep over F0");
    app->add_option("--trials", args.trials, "Monte Carlo trials");
    app->add_option("--seed", args.seed, "Monte Carlo seed");
    app->add_option("--out", args.out, "output file path");
}

ghzpurify::ScenarioConfig build_config(const CommonArgs& args) {
    using ghzpurify::ScenarioConfig;
    ScenarioConfig cfg;
    if (!args.config.empty()) cfg = ScenarioConfig::from_file(args.config);
    auto set = [&](const char* key, const std::string& value) {
        if (!value.empty()) cfg.set_key(key, value, "flag --" + std::string(key));
    };
    set("protocol", args.protocol);
    set("engines", args.engines);
    set("f", args.f_list);
    set("f0", args.f0);
    set("p", args.p);
    set("q", args.q);
    set("p0", args.p0);
    set("pair_f0", args.pair_f0);
    set("ensemble_file", args.ensemble_file);
    set("out", args.out);
    if (args.n >= 0) cfg.set_key("n", std::to_string(args.n), "flag --n");
    if (args.trials >= 0) cfg.set_key("trials", std::to_string(args.trials), "flag --trials");
    if (args.seed >= 0) cfg.set_key("seed", std::to_string(args.seed), "flag --seed");
    if (!args.sweep.empty()) {
        auto first = args.sweep.find(':'), last = args.sweep.rfind(':');
        if (first == std::string::npos || first == last)
            throw std::invalid_argument("--sweep expects start:stop:steps");
        cfg.set_key("sweep_start", args.sweep.substr(0, first), "flag --sweep");
        cfg.set_key("sweep_stop", args.sweep.substr(first + 1, last - first - 1), "flag --sweep");
        cfg.set_key("sweep_steps", args.sweep.substr(last + 1), "flag --sweep");
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GHZ-state multipartite entanglement purification simulator"};
    app.require_subcommand(1);

    CommonArgs curves_args, run_args, explain_args, mc_args;
    CLI::App* curves = app.add_subcommand("curves", "write exact yield/fidelity curves as CSV");
    add_common(curves, curves_args);
    CLI::App* run = app.add_subcommand("run", "run one scenario through the engines");
    add_common(run, run_args);
    CLI::App* explain = app.add_subcommand("explain", "dump the enumeration branch log");
    add_common(explain, explain_args);
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo sweep as CSV");
    add_common(mc, mc_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (curves->parsed()) {
            auto cfg = build_config(curves_args);
            if (!cfg.sweep) cfg.sweep = ghzpurify::SweepSpec{}; // 0.25..1.00 in 16 steps
            return ghzpurify::cmd_curves(cfg);
        }
        if (run->parsed()) return ghzpurify::cmd_run(build_config(run_args));
        if (explain->parsed()) return ghzpurify::cmd_explain(build_config(explain_args));
        if (mc->parsed()) return ghzpurify::cmd_mc(build_config(mc_args));
    } catch (const std::exception& e) {
        std::cerr << "ghz-purify: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
