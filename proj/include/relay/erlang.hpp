#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relay/classes.hpp"

namespace relay {

/// Arrival/service parameters. f is the fraction of calls served directly by
/// the BS; per_rs_split divides the hopped stream by 6 for the per-RS system.
struct TrafficSpec {
    double lambda = 0.0;
    double mu = 1.0;
    double f = 0.5;
    bool per_rs_split = true;

    void validate() const;
    double lambda_direct() const { return f * lambda; }
    double lambda_hopped() const { return (1.0 - f) * lambda; }
};

struct LossClass {
    int demand = 1;
    double load = 0.0;  // erlangs
};

/// Multi-class loss system under complete sharing.
struct LossSystem {
    int capacity = 0;
    std::vector<LossClass> classes;

    void validate() const;
};

struct BlockingVector {
    std::vector<double> per_class;
    double average = 0.0;
};

/// Per-link and composed blocking figures for one scenario point.
struct BlockingReport {
    double p_b_d = 0.0;
    double p_b_hbr = 0.0;
    double p_b_hrm = 0.0;
    double p_b_h = 0.0;
    double p_b_overall = 0.0;
    double tail_block_bs_ms = 0.0;
    double tail_block_bs_rs = 0.0;
    double tail_block_rs_ms = 0.0;
    std::string scenario_hash;
};

/// All occupancy vectors U >= 0 with sum M_c U_c <= K. Throws when the state
/// count would exceed max_states.
std::vector<std::vector<int>> enumerate_states(const LossSystem& sys, std::size_t max_states);

/// Normalized product-form probabilities, aligned with the given state list.
std::vector<double> product_form_probabilities(const LossSystem& sys,
                                               const std::vector<std::vector<int>>& states);

/// Indices of the states in which an arriving class-c call is blocked
/// (free capacity < M_c).
std::vector<std::size_t> blocking_set(const LossSystem& sys,
                                      const std::vector<std::vector<int>>& states,
                                      std::size_t class_index);

/// Per-class blocking via explicit enumeration; average weighted by the given
/// class-membership distribution (must sum to 1).
BlockingVector per_class_blocking_enumerated(const LossSystem& sys,
                                             const std::vector<double>& membership,
                                             std::size_t max_states = 2'000'000);

/// Per-class blocking via the occupancy (Kaufman-Roberts) recursion; scales
/// to large capacities. Agrees with enumeration wherever both run.
BlockingVector per_class_blocking_recursion(const LossSystem& sys,
                                            const std::vector<double>& membership);

/// The RS-MS loss system for one relay: capacity K_RS, one class per RS-MS
/// demand, loads lambda_H (optionally /6) times the class mass over mu.
LossSystem rsms_system(const TrafficSpec& traffic, const ClassDistribution& p_rsms, int k_rs);

enum class DiscountMode { Aggregate, PerPair };

/// The BS loss system: direct classes merged with hopped BS-RS classes of
/// equal demand, the hopped stream thinned by the RS-MS blocking. Aggregate
/// mode thins by the average folded RS-MS blocking; per-pair mode thins each
/// BS-RS demand by the conditional per-class RS-MS blocking taken from the
/// joint leg distribution.
LossSystem bs_system(const TrafficSpec& traffic, const ClassDistribution& p_bsms,
                     const ClassDistribution& p_bsrs, const LossSystem& rsms,
                     const BlockingVector& rsms_blocking, double rsms_tail, int k_bs,
                     DiscountMode mode, const HoppedDemand* joint = nullptr);

/// Folds the per-link tail masses into the conditional blocking figures and
/// composes the hopped and overall probabilities.
BlockingReport compose_report(const TrafficSpec& traffic, double p_b_d_cond, double p_b_hbr_cond,
                              double p_b_hrm_cond, double tail_bs_ms, double tail_bs_rs,
                              double tail_rs_ms);

}  // namespace relay
