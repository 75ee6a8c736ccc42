#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "relay/geometry.hpp"

using namespace relay;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("hexagon basics") {
    const Hexagon h{{1.0, -2.0}, 3.0, kPi / 6.0};
    CHECK(h.area() == doctest::Approx(1.5 * std::sqrt(3.0) * 9.0).epsilon(1e-14));

    CHECK(h.contains(h.center));
    for (const Point2D& v : h.vertices()) CHECK(h.contains(v));  // boundary inclusive
    CHECK_FALSE(h.contains({1.0 + 3.1, -2.0}));
    // Along an edge normal (orientation + 30 deg) the hexagon extends to the
    // apothem 3 * sqrt(3)/2 = 2.598.
    const double nx = std::cos(kPi / 3.0), ny = std::sin(kPi / 3.0);
    CHECK_FALSE(h.contains({1.0 + 2.7 * nx, -2.0 + 2.7 * ny}));
    CHECK(h.contains({1.0 + 2.59 * nx, -2.0 + 2.59 * ny}));
}

TEST_CASE("layout geometry") {
    const double d = 1732.0;
    const CellLayout layout = build_layout(d);
    const double cell_r = d / std::sqrt(3.0);
    const double sub_r = cell_r / std::sqrt(7.0);

    CHECK(layout.base_region.circumradius == doctest::Approx(cell_r).epsilon(1e-14));
    CHECK(layout.base_region.orientation == doctest::Approx(kPi / 6.0));

    // Equal-area split: the seven sub-cells together cover the cell area.
    double covered = layout.base_region.area() / 7.0;  // BS sub-cell (implicit)
    for (const Hexagon& h : layout.relay_regions) {
        CHECK(h.circumradius == doctest::Approx(sub_r).epsilon(1e-14));
        covered += h.area();
    }
    CHECK(covered == doctest::Approx(layout.base_region.area()).epsilon(1e-12));

    for (int k = 0; k < 6; ++k) {
        CHECK(distance(layout.rs_positions[k], {0.0, 0.0}) ==
              doctest::Approx(std::sqrt(3.0) * sub_r).epsilon(1e-14));
        CHECK(distance(layout.neighbor_bs_positions[k], {0.0, 0.0}) ==
              doctest::Approx(d).epsilon(1e-14));
        // RS positions inside the cell, RS regions inside too (centers at least)
        CHECK(layout.base_region.contains(layout.rs_positions[k]));
        // Translated neighbor RS copies keep the relative offset.
        for (int j = 0; j < 6; ++j) {
            const Point2D rel =
                layout.neighbor_rs_positions[k][j] - layout.neighbor_bs_positions[k];
            CHECK(rel.x == doctest::Approx(layout.rs_positions[j].x).epsilon(1e-12));
            CHECK(rel.y == doctest::Approx(layout.rs_positions[j].y).epsilon(1e-12));
        }
    }

    // Neighbor BSs sit across the cell edges: midpoint of BS..neighbor lies on
    // the edge (at apothem distance).
    for (int k = 0; k < 6; ++k) {
        const Point2D mid{layout.neighbor_bs_positions[k].x / 2.0,
                          layout.neighbor_bs_positions[k].y / 2.0};
        CHECK(distance(mid, {0.0, 0.0}) ==
              doctest::Approx(cell_r * std::sqrt(3.0) / 2.0).epsilon(1e-12));
        CHECK(layout.base_region.contains(mid));
    }

    CHECK_THROWS_AS(build_layout(0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_layout(-1.0), std::invalid_argument);

    const CellLayout custom = build_layout(d, 100.0);
    CHECK(custom.relay_regions[0].circumradius == doctest::Approx(100.0));
}

TEST_CASE("quadrature integrates low-degree polynomials exactly") {
    const Hexagon h{{0.4, -0.7}, 2.3, 0.37};
    for (int pts : {3, 12, 48, 192}) {
        const QuadratureRule rule = make_quadrature(h, pts);
        REQUIRE(rule.nodes.size() == rule.weights.size());
        double w_sum = 0.0, ix = 0.0, iy = 0.0, ir2 = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const Point2D p = rule.nodes[i];
            CHECK(h.contains(p));
            w_sum += rule.weights[i];
            ix += rule.weights[i] * p.x;
            iy += rule.weights[i] * p.y;
            const double cx = p.x - h.center.x;
            const double cy = p.y - h.center.y;
            ir2 += rule.weights[i] * (cx * cx + cy * cy);
        }
        const double area = h.area();
        CHECK(w_sum == doctest::Approx(area).epsilon(1e-13));
        CHECK(ix == doctest::Approx(area * h.center.x).epsilon(1e-12));
        CHECK(iy == doctest::Approx(area * h.center.y).epsilon(1e-12));
        // Centered second moment of a regular hexagon with circumradius a:
        // integral of (x^2 + y^2) = 5*sqrt(3)/8 * a^4.
        const double a = h.circumradius;
        CHECK(ir2 == doctest::Approx(5.0 * std::sqrt(3.0) / 8.0 * a * a * a * a).epsilon(1e-12));
    }
}

TEST_CASE("quadrature converges monotonically on a smooth non-polynomial") {
    const Hexagon h{{0.0, 0.0}, 1000.0, kPi / 6.0};
    auto integrate = [&](int pts) {
        const QuadratureRule rule = make_quadrature(h, pts);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const Point2D p = rule.nodes[i];
            const double r = std::hypot(p.x - 1200.0, p.y - 300.0);
            acc += rule.weights[i] * std::pow(r, -3.5);
        }
        return acc;
    };
    const double reference = integrate(1 << 16);
    double prev_err = 1e300;
    for (int pts : {12, 48, 192, 768, 3072}) {
        const double err = std::abs(integrate(pts) - reference);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err / std::abs(reference) < 1e-5);
}

TEST_CASE("quadrature point count grows as requested") {
    const Hexagon h{{0.0, 0.0}, 1.0, 0.0};
    for (int pts : {1, 3, 4, 100}) {
        const QuadratureRule rule = make_quadrature(h, pts);
        CHECK(rule.nodes.size() >= static_cast<std::size_t>(6 * pts));
        CHECK(rule.nodes.size() % 3 == 0);
    }
    CHECK_THROWS_AS(make_quadrature(h, 0), std::invalid_argument);
}
