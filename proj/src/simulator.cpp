#include "relay/simulator.hpp"

#include <cassert>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

#include "relay/interference.hpp"

namespace relay {

namespace {

struct Departure {
    double time = 0.0;
    std::uint64_t seq = 0;
    int bs_amount = 0;
    int rs_amount = 0;
    int rs_index = -1;
    bool ends_hopped_call = false;

    bool operator>(const Departure& o) const {
        if (time != o.time) return time > o.time;
        return seq > o.seq;
    }
};

enum class HoppedDraw { Pair, BrTail, RmTail };

struct Pools {
    int k_bs;
    int bs_free;
    std::vector<int> rs_free;
    int outstanding_bs = 0;
    std::vector<int> outstanding_rs;

    Pools(int kbs, int krs, int nrs)
        : k_bs(kbs), bs_free(kbs), rs_free(nrs, krs), outstanding_rs(nrs, 0) {}

    void seize(int bs, int rs, int rs_idx) {
        bs_free -= bs;
        outstanding_bs += bs;
        if (rs > 0) {
            rs_free[rs_idx] -= rs;
            outstanding_rs[rs_idx] += rs;
        }
        audit();
    }
    void release(int bs, int rs, int rs_idx) {
        bs_free += bs;
        outstanding_bs -= bs;
        if (rs > 0) {
            rs_free[rs_idx] += rs;
            outstanding_rs[rs_idx] -= rs;
        }
        audit();
    }
    void audit() const {
        assert(bs_free >= 0 && bs_free + outstanding_bs == k_bs);
        for (std::size_t i = 0; i < rs_free.size(); ++i) {
            assert(rs_free[i] >= 0 && rs_free[i] + outstanding_rs[i] ==
                                          rs_free[i] + outstanding_rs[i]);
            assert(rs_free[i] >= 0);
        }
    }
};

StreamEstimate summarize(const std::vector<RepResult>& reps,
                         StreamCounts RepResult::*member) {
    StreamEstimate est;
    std::vector<double> fractions;
    for (const RepResult& r : reps) {
        const StreamCounts& c = r.*member;
        est.offered += c.offered;
        est.blocked += c.blocked;
        if (c.offered > 0) fractions.push_back(c.fraction());
    }
    if (est.offered == 0) {
        est.empty_sample = true;
        return est;
    }
    est.fraction = static_cast<double>(est.blocked) / static_cast<double>(est.offered);
    if (fractions.size() >= 2) {
        double mean = 0.0;
        for (double f : fractions) mean += f;
        mean /= fractions.size();
        double var = 0.0;
        for (double f : fractions) var += (f - mean) * (f - mean);
        var /= (fractions.size() - 1);
        est.ci_halfwidth = student_t_975(static_cast<int>(fractions.size()) - 1) *
                           std::sqrt(var / fractions.size());
    }
    return est;
}

BlockingEstimate merge(std::vector<RepResult> reps) {
    BlockingEstimate est;
    est.direct = summarize(reps, &RepResult::direct);
    est.hopped = summarize(reps, &RepResult::hopped);
    est.hopped_bs = summarize(reps, &RepResult::hopped_bs);
    est.hopped_rs = summarize(reps, &RepResult::hopped_rs);
    est.overall = summarize(reps, &RepResult::overall);
    est.replications = std::move(reps);
    return est;
}

BlockingEstimate run_impl(const SimScenario& scenario, const SimConfig& config, bool parallel) {
    scenario.validate();
    config.validate();
    std::vector<RepResult> reps(config.replications);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int r = 0; r < config.replications; ++r) {
        reps[r] = run_replication(scenario, config, r);
    }
    return merge(std::move(reps));
}

}  // namespace

void SimConfig::validate() const {
    if (!(horizon > warmup) || warmup < 0.0) {
        throw std::invalid_argument("SimConfig: need horizon > warmup >= 0");
    }
    if (replications < 1) throw std::invalid_argument("SimConfig: replications must be >= 1");
}

void SimScenario::validate() const {
    if (lambda < 0.0 || !(mu > 0.0) || f < 0.0 || f > 1.0) {
        throw std::invalid_argument("SimScenario: invalid traffic parameters");
    }
    if (k_bs < 0 || k_rs < 0 || rs_count < 1) {
        throw std::invalid_argument("SimScenario: invalid capacities");
    }
    double total = direct_tail;
    for (const auto& [m, p] : direct_pmf) {
        if (m < 1 || p < 0.0) throw std::invalid_argument("SimScenario: bad direct pmf");
        total += p;
    }
    if (f > 0.0 && std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("SimScenario: direct pmf must sum to 1");
    }
    double hop = hopped_br_tail + (1.0 - hopped_br_tail) * hopped_rm_tail;
    for (const auto& [a, b, p] : hopped_pairs) {
        if (a < 1 || b < 1 || p < 0.0) throw std::invalid_argument("SimScenario: bad pair pmf");
        hop += p;
    }
    if (f < 1.0 && std::abs(hop - 1.0) > 1e-9) {
        throw std::invalid_argument("SimScenario: hopped pmf must sum to 1");
    }
}

RepResult run_replication(const SimScenario& scenario, const SimConfig& config, int rep_index) {
    const std::uint64_t rep_seed = config.base_seed + static_cast<std::uint64_t>(rep_index);
    std::mt19937_64 rng_arrival(split_seed(rep_seed, 0));
    std::mt19937_64 rng_routing(split_seed(rep_seed, 1));
    std::mt19937_64 rng_demand(split_seed(rep_seed, 2));
    std::mt19937_64 rng_holding(split_seed(rep_seed, 3));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    RepResult result;
    if (scenario.lambda == 0.0) return result;

    Pools pools(scenario.k_bs, scenario.k_rs, scenario.rs_count);
    std::priority_queue<Departure, std::vector<Departure>, std::greater<Departure>> departures;
    std::uint64_t seq = 0;
    int concurrent_hopped = 0;

    double bs_full_since = -1.0;
    double bs_full_time = 0.0;
    auto track_bs_full = [&](double now) {
        const bool full = pools.bs_free == 0;
        if (full && bs_full_since < 0.0) bs_full_since = now;
        if (!full && bs_full_since >= 0.0) {
            const double lo = std::max(bs_full_since, config.warmup);
            const double hi = std::min(now, config.horizon);
            if (hi > lo) bs_full_time += hi - lo;
            bs_full_since = -1.0;
        }
    };

    auto pop_departures_until = [&](double t) {
        while (!departures.empty() && departures.top().time <= t) {
            const Departure d = departures.top();
            departures.pop();
            pools.release(d.bs_amount, d.rs_amount, d.rs_index);
            if (d.ends_hopped_call) --concurrent_hopped;
            track_bs_full(d.time);
        }
    };

    auto exp_draw = [&](std::mt19937_64& rng, double rate) {
        return -std::log1p(-unif(rng)) / rate;
    };

    double t = exp_draw(rng_arrival, scenario.lambda);
    while (t <= config.horizon) {
        pop_departures_until(t);
        const bool counted = t > config.warmup;

        const bool direct = unif(rng_routing) < scenario.f;
        const int rs_idx =
            std::min(scenario.rs_count - 1,
                     static_cast<int>(unif(rng_routing) * scenario.rs_count));

        if (direct) {
            // Walk the atoms, tail mass last.
            const double u = unif(rng_demand);
            double acc = 0.0;
            int demand = -1;  // -1: tail (blocked on arrival)
            for (const auto& [m, p] : scenario.direct_pmf) {
                acc += p;
                if (u < acc) {
                    demand = m;
                    break;
                }
            }
            const double hold = exp_draw(rng_holding, scenario.mu);
            bool blocked = true;
            if (demand > 0 && pools.bs_free >= demand) {
                blocked = false;
                pools.seize(demand, 0, -1);
                departures.push({t + hold, seq++, demand, 0, -1, false});
            }
            track_bs_full(t);
            if (counted) {
                ++result.direct.offered;
                ++result.overall.offered;
                if (blocked) {
                    ++result.direct.blocked;
                    ++result.overall.blocked;
                }
            }
        } else {
            const double u = unif(rng_demand);
            double acc = 0.0;
            HoppedDraw kind = HoppedDraw::RmTail;
            int m_br = 0, m_rm = 0;
            for (const auto& [a, b, p] : scenario.hopped_pairs) {
                acc += p;
                if (u < acc) {
                    kind = HoppedDraw::Pair;
                    m_br = a;
                    m_rm = b;
                    break;
                }
            }
            if (kind != HoppedDraw::Pair) {
                acc += scenario.hopped_br_tail;
                if (u < acc) kind = HoppedDraw::BrTail;
            }
            const double hold = exp_draw(rng_holding, scenario.mu);
            const double hold2 = (config.holding == HoldingModel::Split)
                                     ? exp_draw(rng_holding, scenario.mu)
                                     : hold;

            bool blocked = true;
            if (kind == HoppedDraw::Pair) {
                bool rs_ok = pools.rs_free[rs_idx] >= m_rm;
                bool bs_ok = pools.bs_free >= m_br;
                if (config.mode == SimMode::Coupled) {
                    if (counted) {
                        ++result.hopped_rs.offered;
                        if (!rs_ok) ++result.hopped_rs.blocked;
                        ++result.hopped_bs.offered;
                        if (!bs_ok) ++result.hopped_bs.blocked;
                    }
                    blocked = !(rs_ok && bs_ok);
                } else {
                    // RS stage first; BS stage only for RS survivors.
                    if (counted) {
                        ++result.hopped_rs.offered;
                        if (!rs_ok) ++result.hopped_rs.blocked;
                    }
                    if (rs_ok) {
                        if (counted) {
                            ++result.hopped_bs.offered;
                            if (!bs_ok) ++result.hopped_bs.blocked;
                        }
                        if (!bs_ok && config.rs_holds_on_bs_block) {
                            pools.seize(0, m_rm, rs_idx);
                            departures.push({t + hold2, seq++, 0, m_rm, rs_idx, false});
                        }
                    }
                    blocked = !(rs_ok && bs_ok);
                }
                if (!blocked) {
                    ++concurrent_hopped;
                    result.max_concurrent_hopped =
                        std::max(result.max_concurrent_hopped, concurrent_hopped);
                    if (config.holding == HoldingModel::Shared) {
                        pools.seize(m_br, m_rm, rs_idx);
                        departures.push({t + hold, seq++, m_br, m_rm, rs_idx, true});
                    } else {
                        pools.seize(m_br, m_rm, rs_idx);
                        const bool bs_later = hold >= hold2;
                        departures.push({t + hold, seq++, m_br, 0, -1, bs_later});
                        departures.push({t + hold2, seq++, 0, m_rm, rs_idx, !bs_later});
                    }
                }
            } else if (counted) {
                // Tail draws are blocked on arrival; attribute to the tailed leg.
                if (kind == HoppedDraw::BrTail) {
                    ++result.hopped_bs.offered;
                    ++result.hopped_bs.blocked;
                } else {
                    ++result.hopped_rs.offered;
                    ++result.hopped_rs.blocked;
                }
            }
            track_bs_full(t);
            if (counted) {
                ++result.hopped.offered;
                ++result.overall.offered;
                if (blocked) {
                    ++result.hopped.blocked;
                    ++result.overall.blocked;
                }
            }
        }
        t += exp_draw(rng_arrival, scenario.lambda);
    }
    pop_departures_until(config.horizon);
    track_bs_full(config.horizon);
    if (bs_full_since >= 0.0) {
        const double lo = std::max(bs_full_since, config.warmup);
        if (config.horizon > lo) bs_full_time += config.horizon - lo;
    }
    result.bs_full_time_fraction = bs_full_time / (config.horizon - config.warmup);
    return result;
}

BlockingEstimate run(const SimScenario& scenario, const SimConfig& config) {
    return run_impl(scenario, config, true);
}

BlockingEstimate run_serial(const SimScenario& scenario, const SimConfig& config) {
    return run_impl(scenario, config, false);
}

ModeComparison compare_modes(const SimScenario& scenario, const SimConfig& config) {
    SimConfig decoupled = config;
    decoupled.mode = SimMode::Decoupled;
    SimConfig coupled = config;
    coupled.mode = SimMode::Coupled;
    return {run(scenario, decoupled), run(scenario, coupled)};
}

double student_t_975(int dof) {
    static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                   2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                   2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                   2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (dof < 1) return table[0];
    if (dof <= 30) return table[dof - 1];
    if (dof <= 40) return 2.021;
    if (dof <= 60) return 2.000;
    if (dof <= 120) return 1.980;
    return 1.960;
}

}  // namespace relay
