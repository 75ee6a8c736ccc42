#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "relay/erlang.hpp"

using namespace relay;

namespace {

LossSystem small_two_class() {
    // Capacity 4, demands (1, 2) -- the standalone relay example.
    LossSystem sys;
    sys.capacity = 4;
    sys.classes = {{1, 1.2}, {2, 0.7}};
    return sys;
}

std::set<std::pair<int, int>> subcarrier_states(const LossSystem& sys,
                                                const std::vector<std::vector<int>>& states,
                                                const std::vector<std::size_t>& idx) {
    // Express occupancy in subcarriers per class (M_c * U_c).
    std::set<std::pair<int, int>> out;
    for (std::size_t s : idx) {
        out.insert({sys.classes[0].demand * states[s][0], sys.classes[1].demand * states[s][1]});
    }
    return out;
}

}  // namespace

TEST_CASE("state enumeration") {
    const LossSystem sys = small_two_class();
    const auto states = enumerate_states(sys, 1000);
    CHECK(states.size() == 9);
    for (const auto& s : states) {
        CHECK(s[0] * 1 + s[1] * 2 <= 4);
    }
    CHECK_THROWS_AS(enumerate_states(sys, 5), std::length_error);

    LossSystem big;
    big.capacity = 100;
    big.classes = {{1, 1.0}, {1, 1.0}, {1, 1.0}};
    CHECK_THROWS_AS(enumerate_states(big, 1000), std::length_error);
}

TEST_CASE("two-class blocking sets in subcarrier coordinates") {
    const LossSystem sys = small_two_class();
    const auto states = enumerate_states(sys, 1000);

    // Narrowband class (demand 1) is blocked only in the fully occupied states.
    const auto b1 = subcarrier_states(sys, states, blocking_set(sys, states, 0));
    CHECK(b1 == std::set<std::pair<int, int>>{{4, 0}, {2, 2}, {0, 4}});

    // Wideband class (demand 2) is blocked whenever fewer than 2 subcarriers
    // remain: the full states plus the occupancy-3 states.
    const auto b2 = subcarrier_states(sys, states, blocking_set(sys, states, 1));
    CHECK(b2 == std::set<std::pair<int, int>>{{4, 0}, {2, 2}, {0, 4}, {3, 0}, {1, 2}});
}

TEST_CASE("product form satisfies the path formula") {
    const LossSystem sys = small_two_class();
    const auto states = enumerate_states(sys, 1000);
    const auto probs = product_form_probabilities(sys, states);

    auto prob_of = [&](int u1, int u2) {
        for (std::size_t s = 0; s < states.size(); ++s) {
            if (states[s][0] == u1 && states[s][1] == u2) return probs[s];
        }
        REQUIRE(false);
        return 0.0;
    };
    const double rho1 = sys.classes[0].load;
    const double rho2 = sys.classes[1].load;
    // P(2 narrow + 1 wide) = rho1^2/2! * rho2/1! * P(empty).
    CHECK(prob_of(2, 1) ==
          doctest::Approx(rho1 * rho1 / 2.0 * rho2 * prob_of(0, 0)).epsilon(1e-12));
    double total = 0.0;
    for (double p : probs) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumeration, recursion and global balance agree") {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> cap_d(1, 30);
    std::uniform_int_distribution<int> nclass_d(1, 4);
    std::uniform_int_distribution<int> demand_d(1, 8);
    std::uniform_real_distribution<double> load_d(0.0, 10.0);

    int done = 0;
    while (done < 30) {
        LossSystem sys;
        sys.capacity = cap_d(rng);
        const int nc = nclass_d(rng);
        for (int c = 0; c < nc; ++c) sys.classes.push_back({demand_d(rng), load_d(rng)});
        std::vector<std::vector<int>> states;
        try {
            states = enumerate_states(sys, 400);
        } catch (const std::length_error&) {
            continue;  // keep the dense global-balance solve tractable
        }
        std::vector<double> membership(nc, 1.0 / nc);
        const BlockingVector a = per_class_blocking_enumerated(sys, membership);
        const BlockingVector b = per_class_blocking_recursion(sys, membership);
        const BlockingVector c = oracles::global_balance_blocking(sys, membership);
        for (int k = 0; k < nc; ++k) {
            CHECK(std::abs(a.per_class[k] - b.per_class[k]) < 1e-9);
            CHECK(std::abs(a.per_class[k] - c.per_class[k]) < 1e-9);
            CHECK(std::abs(b.per_class[k] - c.per_class[k]) < 1e-9);
        }
        ++done;
    }
}

TEST_CASE("single-class recursion reduces to Erlang-B") {
    for (const auto& [k, rho] : std::vector<std::pair<int, double>>{
             {1, 1.0}, {4, 2.0}, {10, 8.0}, {100, 90.0}, {480, 400.0}}) {
        LossSystem sys;
        sys.capacity = k;
        sys.classes = {{1, rho}};
        const BlockingVector b = per_class_blocking_recursion(sys, {1.0});
        CHECK(std::abs(b.per_class[0] - oracles::erlang_b(k, rho)) < 1e-12);
    }
    LossSystem tiny;
    tiny.capacity = 1;
    tiny.classes = {{1, 1.0}};
    CHECK(per_class_blocking_recursion(tiny, {1.0}).per_class[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("demand exceeding capacity blocks with probability one") {
    LossSystem sys;
    sys.capacity = 3;
    sys.classes = {{1, 0.5}, {5, 2.0}};
    const BlockingVector rec = per_class_blocking_recursion(sys, {0.5, 0.5});
    const BlockingVector enu = per_class_blocking_enumerated(sys, {0.5, 0.5});
    CHECK(rec.per_class[1] == 1.0);
    CHECK(enu.per_class[1] == 1.0);
    CHECK(rec.per_class[0] == doctest::Approx(enu.per_class[0]).epsilon(1e-12));
}

TEST_CASE("recursion survives large capacities without overflow") {
    LossSystem sys;
    sys.capacity = 480;
    sys.classes = {{1, 200.0}, {2, 80.0}, {3, 40.0}, {7, 10.0}};
    const BlockingVector b = per_class_blocking_recursion(sys, {0.25, 0.25, 0.25, 0.25});
    for (double p : b.per_class) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(std::isfinite(p));
    }
    // Wider demands block at least as often (complete sharing).
    CHECK(b.per_class[0] <= b.per_class[1]);
    CHECK(b.per_class[1] <= b.per_class[2]);
    CHECK(b.per_class[2] <= b.per_class[3]);
}

TEST_CASE("traffic split") {
    TrafficSpec t{10.0, 2.0, 0.25, true};
    t.validate();
    CHECK(t.lambda_direct() == doctest::Approx(2.5));
    CHECK(t.lambda_hopped() == doctest::Approx(7.5));
    CHECK_THROWS_AS((TrafficSpec{-1.0, 1.0, 0.5, true}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((TrafficSpec{1.0, 0.0, 0.5, true}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((TrafficSpec{1.0, 1.0, 1.5, true}.validate()), std::invalid_argument);
}

TEST_CASE("relay-user system construction") {
    ClassDistribution rm;
    rm.scheme = {0, 2};
    rm.probabilities = {0.6, 0.3};
    rm.tail_mass = 0.1;

    const TrafficSpec t{12.0, 2.0, 0.5, true};
    const LossSystem sys = rsms_system(t, rm, 30);
    CHECK(sys.capacity == 30);
    REQUIRE(sys.classes.size() == 2);
    // lambda_H / 6 = 1, mu = 2 -> load = mass / 2.
    CHECK(sys.classes[0].load == doctest::Approx(0.6 / 2.0));
    CHECK(sys.classes[1].load == doctest::Approx(0.3 / 2.0));

    const TrafficSpec whole{12.0, 2.0, 0.5, false};
    CHECK(rsms_system(whole, rm, 30).classes[0].load == doctest::Approx(6.0 * 0.6 / 2.0));
}

TEST_CASE("base-station system merges direct and discounted hopped load") {
    ClassDistribution bs_ms;
    bs_ms.scheme = {0, 2};
    bs_ms.probabilities = {0.7, 0.3};
    ClassDistribution bs_rs;
    bs_rs.scheme = {0, 2};
    bs_rs.probabilities = {0.5, 0.5};
    ClassDistribution rs_ms;
    rs_ms.scheme = {0, 1};
    rs_ms.probabilities = {1.0};

    const TrafficSpec t{10.0, 1.0, 0.4, true};
    const LossSystem rsms = rsms_system(t, rs_ms, 6);
    BlockingVector rs_block;
    rs_block.per_class = {0.2};
    rs_block.average = 0.2;

    const LossSystem sys = bs_system(t, bs_ms, bs_rs, rsms, rs_block, 0.0, 100,
                                     DiscountMode::Aggregate);
    REQUIRE(sys.classes.size() == 2);
    // demand 1: direct 4 * 0.7 + hopped 6 * 0.5 * 0.8; demand 2 likewise.
    CHECK(sys.classes[0].load == doctest::Approx(4.0 * 0.7 + 6.0 * 0.5 * 0.8).epsilon(1e-12));
    CHECK(sys.classes[1].load == doctest::Approx(4.0 * 0.3 + 6.0 * 0.5 * 0.8).epsilon(1e-12));

    // Per-pair discount with uniform relay blocking matches the aggregate.
    const HoppedDemand joint = hopped_joint_distribution(bs_rs, rs_ms);
    const LossSystem per_pair = bs_system(t, bs_ms, bs_rs, rsms, rs_block, 0.0, 100,
                                          DiscountMode::PerPair, &joint);
    for (std::size_t c = 0; c < sys.classes.size(); ++c) {
        CHECK(per_pair.classes[c].load == doctest::Approx(sys.classes[c].load).epsilon(1e-12));
    }
    CHECK_THROWS_AS(bs_system(t, bs_ms, bs_rs, rsms, rs_block, 0.0, 100, DiscountMode::PerPair),
                    std::invalid_argument);
}

TEST_CASE("report composition") {
    const TrafficSpec t{10.0, 1.0, 0.5, true};
    const BlockingReport r = compose_report(t, 0.1, 0.2, 0.3, 0.01, 0.02, 0.03);
    CHECK(r.p_b_d == doctest::Approx(0.01 + 0.99 * 0.1).epsilon(1e-15));
    CHECK(r.p_b_hbr == doctest::Approx(0.02 + 0.98 * 0.2).epsilon(1e-15));
    CHECK(r.p_b_hrm == doctest::Approx(0.03 + 0.97 * 0.3).epsilon(1e-15));
    CHECK(r.p_b_h == doctest::Approx(1.0 - (1.0 - r.p_b_hbr) * (1.0 - r.p_b_hrm)).epsilon(1e-15));
    CHECK(r.p_b_overall == doctest::Approx(0.5 * r.p_b_d + 0.5 * r.p_b_h).epsilon(1e-15));
    CHECK_THROWS_AS(compose_report(t, -0.1, 0.0, 0.0, 0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compose_report(t, 0.0, 1.1, 0.0, 0.0, 0.0, 0.0), std::invalid_argument);
}
