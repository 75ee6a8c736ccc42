#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "relay/classes.hpp"

using namespace relay;

namespace {

// RateSpec with A = (R/W) log10(2) equal to the given value.
RateSpec rate_with_a(double a) { return {a / std::log10(2.0), 1.0}; }

}  // namespace

TEST_CASE("subcarrier requirement") {
    const RateSpec rate = rate_with_a(1.0);
    CHECK(rate.a() == doctest::Approx(1.0).epsilon(1e-14));
    // A = 1, I = 1: 1/log10(2) = 3.32 -> 4 subcarriers.
    CHECK(subcarriers_required(1.0, rate) == 4);
    // Very clean channel still needs one subcarrier.
    CHECK(subcarriers_required(1e-12, rate) == 1);
    // Very poor channel needs many.
    CHECK(subcarriers_required(1e4, rate) > 1000);
    CHECK_THROWS_AS(subcarriers_required(0.0, rate), std::domain_error);
    CHECK_THROWS_AS(subcarriers_required(1.0, RateSpec{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("thresholds partition the ISR axis consistently with the requirement") {
    for (double a : {0.3, 1.0, 2.5, 12.84}) {
        const RateSpec rate = rate_with_a(a);
        CHECK(demand_threshold(rate, 0) == 0.0);
        double prev = 0.0;
        for (int m = 1; m <= 40; ++m) {
            const double th = demand_threshold(rate, m);
            CHECK(th > prev);
            // Demand m owns (threshold(m-1), threshold(m)]: probe a dense grid.
            const int grid = 1000;
            for (int i = 1; i <= grid; ++i) {
                const double x = prev + (th - prev) * i / grid;
                CHECK(subcarriers_required(x, rate) == m);
            }
            // The threshold itself belongs to its own class.
            CHECK(subcarriers_required(th, rate) == m);
            prev = th;
        }
        // Just past a threshold the requirement steps up.
        const double th5 = demand_threshold(rate, 5);
        // Clearly past the threshold (beyond the boundary roundoff slack) the
        // requirement steps up.
        CHECK(subcarriers_required(th5 * (1.0 + 1e-6), rate) == 6);
    }
}

TEST_CASE("class boundaries") {
    const RateSpec rate = rate_with_a(2.0);
    const ClassScheme scheme{2, 5};  // demands 3..7
    const auto bounds = class_boundaries(rate, scheme);
    REQUIRE(bounds.size() == 6);
    for (int r = 0; r < 5; ++r) {
        CHECK(bounds[r] == demand_threshold(rate, 3 + r));
    }
    CHECK(bounds[5] == demand_threshold(rate, 8));
    for (std::size_t i = 1; i < bounds.size(); ++i) CHECK(bounds[i] > bounds[i - 1]);
    CHECK_THROWS_AS(class_boundaries(rate, ClassScheme{0, 0}), std::invalid_argument);
}

TEST_CASE("class distribution conserves mass and matches the CDF") {
    const RateSpec rate = rate_with_a(1.3);
    const IsrModel model{-1.0, 1.7, 0.0, 0.0};
    const ClassScheme scheme{1, 6};  // demands 2..7
    const ClassDistribution dist = class_distribution(model, rate, scheme, LinkKind::RsMs);
    REQUIRE(dist.probabilities.size() == 6);

    double total = dist.head_mass + dist.tail_mass;
    for (double p : dist.probabilities) {
        CHECK(p >= 0.0);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    // Class r mass equals F(th(M^r)) - F(th(M^r - 1)).
    for (int r = 1; r <= 6; ++r) {
        const double hi = isr_cdf(model, demand_threshold(rate, r + 1));
        const double lo = isr_cdf(model, demand_threshold(rate, r));
        CHECK(dist.probabilities[r - 1] == doctest::Approx(hi - lo).epsilon(1e-12));
    }
    CHECK(dist.head_mass == doctest::Approx(isr_cdf(model, demand_threshold(rate, 1))));
    CHECK(dist.tail_mass ==
          doctest::Approx(1.0 - isr_cdf(model, demand_threshold(rate, 7))).epsilon(1e-12));

    // With min demand 1 there is no head mass.
    const ClassDistribution low = class_distribution(model, rate, {0, 4}, LinkKind::BsMs);
    CHECK(low.head_mass == 0.0);
}

TEST_CASE("demand and conditional masses") {
    ClassDistribution dist;
    dist.scheme = {1, 3};  // demands 2, 3, 4
    dist.probabilities = {0.3, 0.2, 0.1};
    dist.head_mass = 0.15;
    dist.tail_mass = 0.25;

    const auto masses = dist.demand_masses();
    REQUIRE(masses.size() == 3);
    CHECK(masses[0].first == 2);
    CHECK(masses[0].second == doctest::Approx(0.45));  // head folded into the lowest class
    CHECK(masses[2].second == doctest::Approx(0.1));

    const auto cond = dist.conditional_masses();
    double total = 0.0;
    for (const auto& [m, p] : cond) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cond[0].second == doctest::Approx(0.45 / 0.75));
}

TEST_CASE("truncate-renormalize folds head and tail") {
    ClassDistribution dist;
    dist.scheme = {0, 3};
    dist.probabilities = {0.3, 0.2, 0.1};
    dist.head_mass = 0.15;
    dist.tail_mass = 0.25;
    const ClassDistribution t = truncate_renormalize(dist);
    CHECK(t.head_mass == 0.0);
    CHECK(t.tail_mass == 0.0);
    CHECK(t.probabilities[0] == doctest::Approx(0.45));
    CHECK(t.probabilities[2] == doctest::Approx(0.35));
    double total = 0.0;
    for (double p : t.probabilities) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("class range detection") {
    std::map<int, double> pmf{{2, 5e-5}, {3, 0.4}, {4, 0.3}, {5, 5e-5}, {6, 0.2}, {9, 2e-5}};
    const auto [lo, hi] = detect_class_range(pmf, 1e-4);
    CHECK(lo == 3);
    CHECK(hi == 6);
    CHECK_THROWS_AS(detect_class_range(pmf, 0.5), std::domain_error);
    CHECK_THROWS_AS(detect_class_range(pmf, 0.0), std::invalid_argument);

    // Model-driven detection: a higher rate pushes the whole demand range up.
    const IsrModel model{-1.5, 2.0, 0.0, 0.0};
    const RateSpec slow{64e3, 15e3};
    const RateSpec fast{1024e3, 15e3};
    const auto [lo_slow, hi_slow] = detect_class_range(model, slow, 1e-3);
    const auto [lo_fast, hi_fast] = detect_class_range(model, fast, 1e-3);
    CHECK(lo_fast > lo_slow);
    CHECK(hi_fast > hi_slow);
}

TEST_CASE("joint hopped demand distribution") {
    ClassDistribution br;
    br.scheme = {0, 2};
    br.probabilities = {0.6, 0.3};
    br.tail_mass = 0.1;
    ClassDistribution rm;
    rm.scheme = {1, 2};  // demands 2, 3
    rm.probabilities = {0.5, 0.25};
    rm.tail_mass = 0.25;

    const HoppedDemand joint = hopped_joint_distribution(br, rm);
    REQUIRE(joint.pairs.size() == 4);
    double total = 0.0;
    for (const auto& [pair, p] : joint.pairs) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

    // Independence: pair mass is the product of the conditional leg masses.
    CHECK(joint.pairs.at({1, 2}) == doctest::Approx((0.6 / 0.9) * (0.5 / 0.75)).epsilon(1e-14));
    CHECK(joint.pairs.at({2, 3}) == doctest::Approx((0.3 / 0.9) * (0.25 / 0.75)).epsilon(1e-14));

    // Totals are the convolution of the legs.
    CHECK(joint.totals.at(3) == doctest::Approx(joint.pairs.at({1, 2})));
    CHECK(joint.totals.at(4) ==
          doctest::Approx(joint.pairs.at({1, 3}) + joint.pairs.at({2, 2})).epsilon(1e-14));
    CHECK(joint.totals.at(5) == doctest::Approx(joint.pairs.at({2, 3})));
}
