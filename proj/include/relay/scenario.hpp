#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relay/classes.hpp"
#include "relay/erlang.hpp"
#include "relay/geometry.hpp"
#include "relay/interference.hpp"
#include "relay/simulator.hpp"

namespace relay {

/// Effective scenario parameters with the numerical-analysis defaults
/// materialized. Parsed from a flat key=value file with dotted section
/// prefixes; unknown keys are hard errors.
struct ScenarioConfig {
    // geometry.*
    double inter_bs_distance = 1732.0;      // m
    double subcell_circumradius = 0.0;      // m; 0 = equal-area default
    bool rs_interferer_nearest = false;     // else same-offset RS per neighbor

    // radio.*
    double system_bandwidth = 10e6;         // Hz
    double subcarrier_bandwidth = 15e3;     // Hz
    int k_bs = 480;
    int k_rs = 30;
    double beta = 3.5;
    double sigma_bs_ms = 8.0;               // dB
    double sigma_bs_rs = 4.0;               // dB
    double sigma_rs_ms = 8.0;               // dB
    double rate_bps = 64e3;

    // traffic.*
    double f = 0.5;
    std::vector<double> lambda = {20.0};
    double mu = 1.0;

    // classes.*
    double class_epsilon = 1e-4;
    int max_classes = 64;
    int class_offset = -1;                  // -1 = detect from the fitted model
    int class_count = 0;                    // 0 = detect from the fitted model
    TailPolicy tail_policy = TailPolicy::Block;

    // erlang.*
    bool per_rs_split = true;
    DiscountMode discount_mode = DiscountMode::Aggregate;

    // quadrature.*
    int quadrature_points = 192;            // initial points per triangle
    double quadrature_rel_tol = 1e-8;

    // sim.*
    SimMode sim_mode = SimMode::Decoupled;
    double sim_horizon = 2000.0;
    double sim_warmup = 200.0;
    int sim_replications = 20;
    HoldingModel holding_model = HoldingModel::Shared;
    bool rs_holds_on_bs_block = false;
    std::uint64_t seed = 1;

    // fit.*
    std::uint64_t mc_samples = 1'000'000;   // exact-sampling KS column

    void validate() const;
    /// Canonical key=value rendering (defaults materialized, keys sorted);
    /// parsing it back reproduces this config.
    std::string canonical() const;
    /// FNV-1a hash of the canonical rendering, hex.
    std::string hash() const;
};

ScenarioConfig parse_config(const std::string& text, const std::string& source_name = "config");
ScenarioConfig load_config(const std::string& path);

/// Parses a scalar, a comma list, or start:stop:step (inclusive stop).
std::vector<double> parse_sweep(const std::string& text);

/// Fitted per-link ISR models plus the geometries they came from.
struct LinkModels {
    CellLayout layout;
    LinkGeometry geom_bs_ms, geom_bs_rs, geom_rs_ms;
    IsrModel bs_ms, bs_rs, rs_ms;
};

LinkModels fit_models(const ScenarioConfig& config);

/// Per-link class distributions and the hopped joint leg distribution,
/// with the configured tail policy already applied.
struct LinkClasses {
    ClassDistribution bs_ms, bs_rs, rs_ms;
    HoppedDemand joint;
};

LinkClasses build_classes(const ScenarioConfig& config, const LinkModels& models);

/// Full analytical pipeline for one sweep point.
BlockingReport analyze_point(const ScenarioConfig& config, const LinkClasses& classes,
                             double lambda);

SimScenario make_sim_scenario(const ScenarioConfig& config, const LinkClasses& classes,
                              double lambda);
SimConfig make_sim_config(const ScenarioConfig& config);

/// Output directory resolution: explicit argument, else $RELAYCAP_OUT,
/// else the current directory.
std::string resolve_out_dir(const std::string& cli_value);

/// Atomic text write (temp file + rename). Creates the directory if needed.
void write_text_file(const std::string& path, const std::string& content);

std::string class_distribution_csv(const LinkClasses& classes);
std::string sweep_csv(const std::vector<std::pair<double, BlockingReport>>& points);
std::string report_json(const ScenarioConfig& config, double lambda, const BlockingReport& report);
std::string replication_csv(const BlockingEstimate& estimate);
std::string comparison_csv(const std::vector<double>& lambdas,
                           const std::vector<BlockingReport>& analytical,
                           const std::vector<BlockingEstimate>& simulated);
struct FitRow {
    LinkKind link;
    double m1, m2, mu, sigma, ks;
};
std::string fit_csv(const std::vector<FitRow>& rows);

}  // namespace relay
