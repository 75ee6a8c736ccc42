#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "relay/erlang.hpp"

namespace relay {

enum class SimMode { Decoupled, Coupled };
enum class HoldingModel { Shared, Split };

struct SimConfig {
    SimMode mode = SimMode::Decoupled;
    double horizon = 1000.0;
    double warmup = 100.0;
    int replications = 20;
    std::uint64_t base_seed = 1;
    HoldingModel holding = HoldingModel::Shared;
    // Decoupled mode: whether a call blocked at the BS stage keeps its RS
    // seizure for the full holding time (default: released immediately).
    bool rs_holds_on_bs_block = false;

    void validate() const;
};

/// Sampled inputs of the event loop: demand distributions as explicit atoms
/// plus blocked-on-arrival tail masses.
struct SimScenario {
    double lambda = 0.0;
    double mu = 1.0;
    double f = 0.5;
    int k_bs = 0;
    int k_rs = 0;
    int rs_count = 6;
    std::vector<std::pair<int, double>> direct_pmf;         // (demand, mass), non-tail
    double direct_tail = 0.0;
    std::vector<std::tuple<int, int, double>> hopped_pairs; // (m_br, m_rm, mass), non-tail
    double hopped_br_tail = 0.0;                            // BS-RS leg tail mass
    double hopped_rm_tail = 0.0;                            // RS-MS leg tail mass

    void validate() const;
};

struct StreamCounts {
    std::uint64_t offered = 0;
    std::uint64_t blocked = 0;

    double fraction() const { return offered == 0 ? 0.0 : double(blocked) / double(offered); }
};

struct RepResult {
    StreamCounts direct, hopped, hopped_bs, hopped_rs, overall;
    double bs_full_time_fraction = 0.0;  // time-average of bs_free == 0 after warmup
    int max_concurrent_hopped = 0;
};

struct StreamEstimate {
    double fraction = 0.0;
    double ci_halfwidth = 0.0;  // 95%, Student-t over replication fractions
    std::uint64_t offered = 0;
    std::uint64_t blocked = 0;
    bool empty_sample = false;
};

struct BlockingEstimate {
    StreamEstimate direct, hopped, hopped_bs, hopped_rs, overall;
    std::vector<RepResult> replications;
};

RepResult run_replication(const SimScenario& scenario, const SimConfig& config, int rep_index);

BlockingEstimate run(const SimScenario& scenario, const SimConfig& config);
BlockingEstimate run_serial(const SimScenario& scenario, const SimConfig& config);

/// Runs coupled and decoupled admission on common random numbers.
struct ModeComparison {
    BlockingEstimate decoupled;
    BlockingEstimate coupled;
};

ModeComparison compare_modes(const SimScenario& scenario, const SimConfig& config);

/// Two-sided 97.5% Student-t quantile (95% interval half-width factor).
double student_t_975(int dof);

}  // namespace relay
