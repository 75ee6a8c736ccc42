#include "relay/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relay {

namespace {
constexpr double kPi = std::numbers::pi;
}

double distance(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

double squared_distance(Point2D a, Point2D b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

Point2D rotate(Point2D p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

std::array<Point2D, 6> Hexagon::vertices() const {
    std::array<Point2D, 6> v;
    for (int k = 0; k < 6; ++k) {
        const double a = orientation + k * kPi / 3.0;
        v[k] = {center.x + circumradius * std::cos(a), center.y + circumradius * std::sin(a)};
    }
    return v;
}

double Hexagon::area() const {
    return 1.5 * std::sqrt(3.0) * circumradius * circumradius;
}

bool Hexagon::contains(Point2D p) const {
    // Convex polygon test, boundary inclusive up to a relative tolerance.
    const auto v = vertices();
    const double tol = 1e-12 * circumradius * circumradius;
    for (int k = 0; k < 6; ++k) {
        const Point2D a = v[k];
        const Point2D b = v[(k + 1) % 6];
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cross < -tol) return false;
    }
    return true;
}

bool contains(const Hexagon& region, Point2D p) { return region.contains(p); }

CellLayout build_layout(double inter_bs_distance, double subcell_circumradius) {
    if (!(inter_bs_distance > 0.0)) {
        throw std::invalid_argument("build_layout: inter_bs_distance must be positive");
    }
    const double cell_radius = inter_bs_distance / std::sqrt(3.0);
    const double rs =
        subcell_circumradius > 0.0 ? subcell_circumradius : cell_radius / std::sqrt(7.0);

    CellLayout layout;
    layout.inter_bs_distance = inter_bs_distance;
    // Cell hexagon: first vertex at 30 deg, edge normals (and neighbor BSs) at k*60.
    layout.base_region = Hexagon{{0.0, 0.0}, cell_radius, kPi / 6.0};
    const double rs_offset = std::sqrt(3.0) * rs;
    for (int k = 0; k < 6; ++k) {
        const double a = kPi / 6.0 + k * kPi / 3.0;
        layout.rs_positions[k] = {rs_offset * std::cos(a), rs_offset * std::sin(a)};
        layout.relay_regions[k] = Hexagon{layout.rs_positions[k], rs, 0.0};
    }
    layout.neighbor_bs_positions.resize(6);
    layout.neighbor_rs_positions.resize(6);
    for (int k = 0; k < 6; ++k) {
        const double a = k * kPi / 3.0;
        const Point2D bs{inter_bs_distance * std::cos(a), inter_bs_distance * std::sin(a)};
        layout.neighbor_bs_positions[k] = bs;
        for (int j = 0; j < 6; ++j) {
            layout.neighbor_rs_positions[k][j] = bs + layout.rs_positions[j];
        }
    }
    return layout;
}

QuadratureRule make_quadrature(const Hexagon& region, int points_per_triangle) {
    if (points_per_triangle < 1) {
        throw std::invalid_argument("make_quadrature: points_per_triangle must be >= 1");
    }
    int n = 1;
    while (3 * n * n < points_per_triangle) ++n;

    QuadratureRule rule;
    rule.target_region = region;
    const auto verts = region.vertices();
    const double tri_area = region.area() / 6.0;
    const double sub_area = tri_area / (n * n);
    const double w = sub_area / 3.0;

    for (int t = 0; t < 6; ++t) {
        const Point2D c = region.center;
        const Point2D e1 = verts[t] - c;
        const Point2D e2 = verts[(t + 1) % 6] - c;
        auto at = [&](double u, double v) -> Point2D {
            return {c.x + u * e1.x + v * e2.x, c.y + u * e1.y + v * e2.y};
        };
        const double inv = 1.0 / n;
        auto emit = [&](double u0, double v0, double u1, double v1, double u2, double v2) {
            // Degree-2 mid-edge rule.
            rule.nodes.push_back(at(0.5 * (u0 + u1), 0.5 * (v0 + v1)));
            rule.nodes.push_back(at(0.5 * (u1 + u2), 0.5 * (v1 + v2)));
            rule.nodes.push_back(at(0.5 * (u2 + u0), 0.5 * (v2 + v0)));
            rule.weights.push_back(w);
            rule.weights.push_back(w);
            rule.weights.push_back(w);
        };
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n - i; ++j) {
                const double u = i * inv;
                const double v = j * inv;
                emit(u, v, u + inv, v, u, v + inv);
                if (i + j <= n - 2) {
                    emit(u + inv, v, u, v + inv, u + inv, v + inv);
                }
            }
        }
    }
    return rule;
}

}  // namespace relay
