#pragma once

#include <map>
#include <utility>
#include <vector>

#include "relay/interference.hpp"

namespace relay {

/// Common rate requirement and subcarrier bandwidth. A = (R/W) * log10(2).
struct RateSpec {
    double rate_bps = 0.0;
    double subcarrier_bw_hz = 0.0;

    double a() const;
    void validate() const;
};

/// Consecutive integer subcarrier demands M^r = r + offset, r = 1..class_count.
struct ClassScheme {
    int offset = 0;
    int class_count = 0;

    int demand(int r) const { return r + offset; }  // r is 1-based
    int min_demand() const { return 1 + offset; }
    int max_demand() const { return class_count + offset; }
    void validate() const;
};

/// Integer subcarriers needed to reach the rate at ISR I: the ceiling of
/// A / log10(1 + 1/I), at least 1. The ISR axis is partitioned so that demand
/// M owns the interval (threshold(M-1), threshold(M)]; a boundary value thus
/// belongs to the class it is the threshold of.
int subcarriers_required(double isr, const RateSpec& rate);

/// ISR threshold below (or at) which demand M suffices: (10^(A/M) - 1)^-1.
/// Returns 0 for M <= 0.
double demand_threshold(const RateSpec& rate, int demand);

/// The l+1 thresholds for demands M^1..M^l and M^l + 1, strictly increasing.
std::vector<double> class_boundaries(const RateSpec& rate, const ClassScheme& scheme);

/// Probability mass over the scheme's classes. probabilities[r-1] is the mass
/// of demand M^r; head_mass is the mass needing fewer than M^1 subcarriers
/// (zero when M^1 = 1) and tail_mass the mass needing more than M^l.
struct ClassDistribution {
    ClassScheme scheme;
    std::vector<double> probabilities;
    double head_mass = 0.0;
    double tail_mass = 0.0;
    LinkKind link = LinkKind::BsMs;

    /// Unconditional mass per demand with the head folded into the lowest
    /// class (a user needing fewer subcarriers is served with M^1).
    std::vector<std::pair<int, double>> demand_masses() const;
    /// As above, normalized over the non-tail mass.
    std::vector<std::pair<int, double>> conditional_masses() const;
};

ClassDistribution class_distribution(const IsrModel& model, const RateSpec& rate,
                                     const ClassScheme& scheme, LinkKind link);

enum class TailPolicy { Block, TruncateRenormalize };

/// Folds the tail into the highest class (and clears head/tail masses).
ClassDistribution truncate_renormalize(const ClassDistribution& dist);

/// Smallest and largest demand whose probability mass reaches epsilon.
/// Throws if no demand does.
std::pair<int, int> detect_class_range(const std::map<int, double>& demand_pmf, double epsilon);

/// Same, scanning the fitted model's demand distribution directly.
std::pair<int, int> detect_class_range(const IsrModel& model, const RateSpec& rate, double epsilon,
                                       int max_demand = 4096);

/// Joint demand distribution of a hopped call's two legs (independent links)
/// together with the convolution of the totals.
struct HoppedDemand {
    std::map<std::pair<int, int>, double> pairs;
    std::map<int, double> totals;
};

HoppedDemand hopped_joint_distribution(const ClassDistribution& p_bsrs,
                                       const ClassDistribution& p_rsms);

}  // namespace relay
