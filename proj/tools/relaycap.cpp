#include <cstdint>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "relay/scenario.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;   // -1: keep the config's seed
    int threads = 0;          // 0: leave the OpenMP default
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Scenario config file")->required();
    cmd->add_option("--out", args.out_dir, "Output directory (default: $RELAYCAP_OUT or .)");
    cmd->add_option("--seed", args.seed, "Override the config's base seed");
    cmd->add_option("--threads", args.threads, "OpenMP thread count");
}

relay::ScenarioConfig prepare(const CommonArgs& args) {
    if (args.threads > 0) omp_set_num_threads(args.threads);
    relay::ScenarioConfig cfg = relay::load_config(args.config_path);
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
    return dir + "/" + name;
}

int run_analyze(const CommonArgs& args) {
    const relay::ScenarioConfig cfg = prepare(args);
    const std::string out = relay::resolve_out_dir(args.out_dir);

    const relay::LinkModels models = relay::fit_models(cfg);
    const relay::LinkClasses classes = relay::build_classes(cfg, models);

    std::vector<std::pair<double, relay::BlockingReport>> points;
    for (std::size_t i = 0; i < cfg.lambda.size(); ++i) {
        const double lambda = cfg.lambda[i];
        const relay::BlockingReport report = relay::analyze_point(cfg, classes, lambda);
        points.emplace_back(lambda, report);
        relay::write_text_file(join(out, fmt::format("report_{:03d}.json", i)),
                               relay::report_json(cfg, lambda, report));
    }
    relay::write_text_file(join(out, "class_distribution.csv"),
                           relay::class_distribution_csv(classes));
    relay::write_text_file(join(out, "blocking_sweep.csv"), relay::sweep_csv(points));
    relay::write_text_file(join(out, "effective_config.txt"), cfg.canonical());
    fmt::print("analyze: {} sweep point(s) written to {}\n", points.size(), out);
    return 0;
}

int run_simulate(const CommonArgs& args) {
    const relay::ScenarioConfig cfg = prepare(args);
    const std::string out = relay::resolve_out_dir(args.out_dir);

    const relay::LinkModels models = relay::fit_models(cfg);
    const relay::LinkClasses classes = relay::build_classes(cfg, models);
    const relay::SimConfig sim = relay::make_sim_config(cfg);

    std::vector<relay::BlockingReport> analytical;
    std::vector<relay::BlockingEstimate> decoupled, coupled;
    for (std::size_t i = 0; i < cfg.lambda.size(); ++i) {
        const double lambda = cfg.lambda[i];
        analytical.push_back(relay::analyze_point(cfg, classes, lambda));
        const relay::SimScenario scenario = relay::make_sim_scenario(cfg, classes, lambda);
        relay::ModeComparison cmp = relay::compare_modes(scenario, sim);
        relay::write_text_file(join(out, fmt::format("replications_{:03d}_decoupled.csv", i)),
                               relay::replication_csv(cmp.decoupled));
        relay::write_text_file(join(out, fmt::format("replications_{:03d}_coupled.csv", i)),
                               relay::replication_csv(cmp.coupled));
        decoupled.push_back(std::move(cmp.decoupled));
        coupled.push_back(std::move(cmp.coupled));
    }
    relay::write_text_file(join(out, "comparison_decoupled.csv"),
                           relay::comparison_csv(cfg.lambda, analytical, decoupled));
    relay::write_text_file(join(out, "comparison_coupled.csv"),
                           relay::comparison_csv(cfg.lambda, analytical, coupled));
    relay::write_text_file(join(out, "effective_config.txt"), cfg.canonical());
    fmt::print("simulate: {} sweep point(s), {} replication(s) each, written to {}\n",
               cfg.lambda.size(), sim.replications, out);
    return 0;
}

int run_fit(const CommonArgs& args) {
    const relay::ScenarioConfig cfg = prepare(args);
    const std::string out = relay::resolve_out_dir(args.out_dir);

    const relay::LinkModels models = relay::fit_models(cfg);
    std::vector<relay::FitRow> rows;
    auto row = [&](relay::LinkKind link, const relay::LinkGeometry& geom,
                   const relay::IsrModel& model) {
        const double ks = relay::mc_ks_distance(geom, model, cfg.mc_samples, cfg.seed);
        rows.push_back({link, model.m1, model.m2, model.mu, model.sigma, ks});
    };
    row(relay::LinkKind::BsMs, models.geom_bs_ms, models.bs_ms);
    row(relay::LinkKind::BsRs, models.geom_bs_rs, models.bs_rs);
    row(relay::LinkKind::RsMs, models.geom_rs_ms, models.rs_ms);

    relay::write_text_file(join(out, "interference_fit.csv"), relay::fit_csv(rows));
    relay::write_text_file(join(out, "effective_config.txt"), cfg.canonical());
    fmt::print("fit-interference: 3 link model(s) written to {}\n", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relay-assisted OFDMA downlink blocking analysis"};
    app.require_subcommand(1);

    CommonArgs analyze_args, simulate_args, fit_args;
    CLI::App* analyze = app.add_subcommand("analyze", "Analytical blocking sweep");
    add_common(analyze, analyze_args);
    CLI::App* simulate = app.add_subcommand("simulate", "Event simulation and mode comparison");
    add_common(simulate, simulate_args);
    CLI::App* fit =
        app.add_subcommand("fit-interference", "Per-link interference model fit and KS check");
    add_common(fit, fit_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(analyze_args);
        if (simulate->parsed()) return run_simulate(simulate_args);
        if (fit->parsed()) return run_fit(fit_args);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 1;
}
