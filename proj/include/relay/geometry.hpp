#pragma once

#include <array>
#include <vector>

namespace relay {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }

double distance(Point2D a, Point2D b);
double squared_distance(Point2D a, Point2D b);
Point2D rotate(Point2D p, double angle);

/// Regular hexagon given by center, circumradius and the angle of its first
/// vertex measured from the +x axis. Membership is boundary-inclusive.
struct Hexagon {
    Point2D center;
    double circumradius = 0.0;
    double orientation = 0.0;

    std::array<Point2D, 6> vertices() const;
    double area() const;
    bool contains(Point2D p) const;
};

bool contains(const Hexagon& region, Point2D p);

/// Reference cell: base region H0 around the BS at the origin, six relay
/// sub-cells H1..H6, and the translated first-tier neighbor cells.
struct CellLayout {
    Hexagon base_region;
    std::array<Hexagon, 6> relay_regions;
    std::array<Point2D, 6> rs_positions;
    std::vector<Point2D> neighbor_bs_positions;
    std::vector<std::array<Point2D, 6>> neighbor_rs_positions;
    double inter_bs_distance = 0.0;
};

/// Builds the seven-sub-cell layout. The cell hexagon has circumradius
/// inter_bs_distance/sqrt(3) with its first vertex at 30 degrees so the six
/// neighbor BSs sit at angles k*60. Sub-cells default to the equal-area
/// circumradius r_s = (D/sqrt(3))/sqrt(7); pass subcell_circumradius > 0 to
/// override.
CellLayout build_layout(double inter_bs_distance, double subcell_circumradius = 0.0);

/// Nodes and weights for integrating over a hexagonal region. The weights sum
/// to the region area.
struct QuadratureRule {
    std::vector<Point2D> nodes;
    std::vector<double> weights;
    Hexagon target_region;
};

/// Splits the hexagon into 6 triangles from the center, subdivides each into
/// n^2 congruent sub-triangles and applies the degree-2 three-point mid-edge
/// rule per sub-triangle. n is chosen so the point count per triangle (3*n^2)
/// is at least points_per_triangle.
QuadratureRule make_quadrature(const Hexagon& region, int points_per_triangle);

}  // namespace relay
