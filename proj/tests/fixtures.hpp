#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "squarepeg/geom.hpp"

namespace squarepeg::testing {

inline Polygon poly(std::initializer_list<std::pair<double, double>> pts)
{
    std::vector<Point> v;
    for (auto [x, y] : pts)
        v.emplace_back(x, y);
    return Polygon(std::move(v));
}

inline Polygon right_triangle() { return poly({{0, 0}, {4, 0}, {0, 4}}); }
inline Polygon unit_square() { return poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
inline Polygon obtuse_triangle() { return poly({{0, 0}, {4, 0}, {3, 1}}); }
inline Polygon l_hexagon() { return poly({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}); }

/// Regular n-gon with circumradius r, counterclockwise, first vertex at angle phase.
inline Polygon regular(int n, double r = 1.0, double phase = std::numbers::pi / 2)
{
    std::vector<Point> v;
    for (int k = 0; k < n; ++k) {
        const double a = phase + 2 * std::numbers::pi * k / n;
        v.emplace_back(r * std::cos(a), r * std::sin(a));
    }
    return Polygon(std::move(v));
}

/// Obtuse generic polygons with three inscribed squares each.
inline std::vector<Polygon> obtuse_samples()
{
    return {
        poly({{0.217, 0.59}, {-0.48, 0.488}, {-0.883, 0.014}, {-0.12, -0.793}, {0.391, -0.434}}),
        poly({{0.721, 0.199}, {0.001, 0.45}, {-0.497, 0.504}, {-0.725, -0.498}, {-0.108, -0.866}, {0.388, -0.839}}),
        poly({{0.837, 0.154}, {0.489, 0.705}, {0.137, 0.917}, {-0.713, 0.17}, {-0.433, -0.536}, {0.033, -0.495},
              {0.255, -0.742}, {0.918, -0.263}}),
    };
}

/// Random rigid motion (rotation + translation).
struct Rigid {
    Eigen::Matrix2d A;
    Point b;
    Point operator()(const Point& p) const { return A * p + b; }
};

inline Rigid random_rigid(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), off(-5, 5);
    const double a = ang(rng);
    Rigid m;
    m.A << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    m.b = Point(off(rng), off(rng));
    return m;
}

}  // namespace squarepeg::testing
