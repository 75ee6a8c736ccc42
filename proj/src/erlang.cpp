#include "relay/erlang.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace relay {

namespace {

int used_capacity(const LossSystem& sys, const std::vector<int>& state) {
    int used = 0;
    for (std::size_t c = 0; c < state.size(); ++c) used += sys.classes[c].demand * state[c];
    return used;
}

void check_membership(const LossSystem& sys, const std::vector<double>& membership) {
    if (membership.size() != sys.classes.size()) {
        throw std::invalid_argument("blocking: membership size must match class count");
    }
}

}  // namespace

void TrafficSpec::validate() const {
    if (lambda < 0.0) throw std::invalid_argument("TrafficSpec: lambda must be nonnegative");
    if (!(mu > 0.0)) throw std::invalid_argument("TrafficSpec: mu must be positive");
    if (f < 0.0 || f > 1.0) throw std::invalid_argument("TrafficSpec: f must lie in [0, 1]");
}

void LossSystem::validate() const {
    if (capacity < 0) throw std::invalid_argument("LossSystem: capacity must be nonnegative");
    for (const LossClass& c : classes) {
        if (c.demand < 1) throw std::invalid_argument("LossSystem: class demand must be >= 1");
        if (c.load < 0.0) throw std::invalid_argument("LossSystem: class load must be >= 0");
    }
}

std::vector<std::vector<int>> enumerate_states(const LossSystem& sys, std::size_t max_states) {
    sys.validate();
    std::vector<std::vector<int>> states;
    std::vector<int> current(sys.classes.size(), 0);
    // Depth-first over class indices with the remaining capacity.
    auto recurse = [&](auto&& self, std::size_t c, int remaining) -> void {
        if (c == sys.classes.size()) {
            if (states.size() >= max_states) {
                throw std::length_error("enumerate_states: state space exceeds max_states");
            }
            states.push_back(current);
            return;
        }
        const int demand = sys.classes[c].demand;
        for (int u = 0; u * demand <= remaining; ++u) {
            current[c] = u;
            self(self, c + 1, remaining - u * demand);
        }
        current[c] = 0;
    };
    recurse(recurse, 0, sys.capacity);
    return states;
}

std::vector<double> product_form_probabilities(const LossSystem& sys,
                                               const std::vector<std::vector<int>>& states) {
    std::vector<double> probs(states.size());
    double total = 0.0;
    for (std::size_t s = 0; s < states.size(); ++s) {
        double w = 1.0;
        for (std::size_t c = 0; c < sys.classes.size(); ++c) {
            for (int u = 1; u <= states[s][c]; ++u) w *= sys.classes[c].load / u;
        }
        probs[s] = w;
        total += w;
    }
    for (double& p : probs) p /= total;
    return probs;
}

std::vector<std::size_t> blocking_set(const LossSystem& sys,
                                      const std::vector<std::vector<int>>& states,
                                      std::size_t class_index) {
    const int demand = sys.classes.at(class_index).demand;
    std::vector<std::size_t> blocked;
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (used_capacity(sys, states[s]) + demand > sys.capacity) blocked.push_back(s);
    }
    return blocked;
}

BlockingVector per_class_blocking_enumerated(const LossSystem& sys,
                                             const std::vector<double>& membership,
                                             std::size_t max_states) {
    check_membership(sys, membership);
    const auto states = enumerate_states(sys, max_states);
    const auto probs = product_form_probabilities(sys, states);
    BlockingVector out;
    out.per_class.resize(sys.classes.size());
    for (std::size_t c = 0; c < sys.classes.size(); ++c) {
        double p = 1.0;
        if (sys.classes[c].demand <= sys.capacity) {
            p = 0.0;
            for (std::size_t s : blocking_set(sys, states, c)) p += probs[s];
        }
        out.per_class[c] = std::min(1.0, p);
        out.average += out.per_class[c] * membership[c];
    }
    return out;
}

BlockingVector per_class_blocking_recursion(const LossSystem& sys,
                                            const std::vector<double>& membership) {
    sys.validate();
    check_membership(sys, membership);
    const int k = sys.capacity;
    std::vector<double> q(k + 1, 0.0);
    q[0] = 1.0;
    for (int j = 1; j <= k; ++j) {
        double v = 0.0;
        for (const LossClass& c : sys.classes) {
            if (c.demand <= j) v += c.demand * c.load * q[j - c.demand];
        }
        q[j] = v / j;
        if (q[j] > 1e200) {
            for (int i = 0; i <= j; ++i) q[i] /= 1e200;
        }
    }
    double total = 0.0;
    for (double v : q) total += v;
    for (double& v : q) v /= total;

    BlockingVector out;
    out.per_class.resize(sys.classes.size());
    for (std::size_t c = 0; c < sys.classes.size(); ++c) {
        const int m = sys.classes[c].demand;
        double p = 1.0;
        if (m <= k) {
            p = 0.0;
            for (int j = k - m + 1; j <= k; ++j) p += q[j];
        }
        out.per_class[c] = std::min(1.0, p);
        out.average += out.per_class[c] * membership[c];
    }
    return out;
}

LossSystem rsms_system(const TrafficSpec& traffic, const ClassDistribution& p_rsms, int k_rs) {
    traffic.validate();
    const double lam = traffic.per_rs_split ? traffic.lambda_hopped() / 6.0
                                            : traffic.lambda_hopped();
    LossSystem sys;
    sys.capacity = k_rs;
    for (const auto& [demand, mass] : p_rsms.demand_masses()) {
        sys.classes.push_back({demand, lam * mass / traffic.mu});
    }
    sys.validate();
    return sys;
}

LossSystem bs_system(const TrafficSpec& traffic, const ClassDistribution& p_bsms,
                     const ClassDistribution& p_bsrs, const LossSystem& rsms,
                     const BlockingVector& rsms_blocking, double rsms_tail, int k_bs,
                     DiscountMode mode, const HoppedDemand* joint) {
    traffic.validate();
    std::map<int, double> loads;
    for (const auto& [demand, mass] : p_bsms.demand_masses()) {
        loads[demand] += traffic.lambda_direct() * mass / traffic.mu;
    }

    // Map RS-MS demand -> per-class blocking for the per-pair discount.
    std::map<int, double> rm_block;
    for (std::size_t c = 0; c < rsms.classes.size(); ++c) {
        rm_block[rsms.classes[c].demand] = rsms_blocking.per_class[c];
    }

    const double aggregate_survive =
        (1.0 - rsms_tail) * (1.0 - rsms_blocking.average);
    for (const auto& [demand, mass] : p_bsrs.demand_masses()) {
        double survive = aggregate_survive;
        if (mode == DiscountMode::PerPair) {
            if (joint == nullptr) {
                throw std::invalid_argument("bs_system: per-pair discount needs the joint demand");
            }
            double cond = 0.0, norm = 0.0;
            for (const auto& [pair, p] : joint->pairs) {
                if (pair.first != demand) continue;
                norm += p;
                auto it = rm_block.find(pair.second);
                const double blocked = it == rm_block.end() ? 1.0 : it->second;
                cond += p * (1.0 - blocked);
            }
            survive = norm > 0.0 ? (1.0 - rsms_tail) * cond / norm : 0.0;
        }
        loads[demand] += traffic.lambda_hopped() * mass * survive / traffic.mu;
    }

    LossSystem sys;
    sys.capacity = k_bs;
    for (const auto& [demand, load] : loads) sys.classes.push_back({demand, load});
    sys.validate();
    return sys;
}

BlockingReport compose_report(const TrafficSpec& traffic, double p_b_d_cond, double p_b_hbr_cond,
                              double p_b_hrm_cond, double tail_bs_ms, double tail_bs_rs,
                              double tail_rs_ms) {
    traffic.validate();
    for (double v : {p_b_d_cond, p_b_hbr_cond, p_b_hrm_cond, tail_bs_ms, tail_bs_rs, tail_rs_ms}) {
        if (v < 0.0 || v > 1.0) {
            throw std::invalid_argument("compose_report: probabilities must lie in [0, 1]");
        }
    }
    BlockingReport r;
    r.tail_block_bs_ms = tail_bs_ms;
    r.tail_block_bs_rs = tail_bs_rs;
    r.tail_block_rs_ms = tail_rs_ms;
    r.p_b_d = tail_bs_ms + (1.0 - tail_bs_ms) * p_b_d_cond;
    r.p_b_hbr = tail_bs_rs + (1.0 - tail_bs_rs) * p_b_hbr_cond;
    r.p_b_hrm = tail_rs_ms + (1.0 - tail_rs_ms) * p_b_hrm_cond;
    r.p_b_h = 1.0 - (1.0 - r.p_b_hbr) * (1.0 - r.p_b_hrm);
    r.p_b_overall = traffic.f * r.p_b_d + (1.0 - traffic.f) * r.p_b_h;
    return r;
}

}  // namespace relay
