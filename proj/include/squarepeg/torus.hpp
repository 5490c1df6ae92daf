#pragma once

// The curve set U on the torus T = X x X of boundary pairs (y, z) such that
// u = rotate(z, y, -1) is also on X, i.e. (y, z, u) is an inscribed right
// isosceles triangle with the right angle at y.
//
// For y on a fixed edge, X' = rotate(X, y, +1) is a translate of the rotated
// polygon, so each (edge of z, edge of u) pair contributes a straight piece
// whose end times are roots of linear equations in y's position.

#include <array>
#include <cstddef>
#include <vector>

#include "squarepeg/enumerator.hpp"
#include "squarepeg/geom.hpp"

namespace squarepeg {

struct TorusPoint {
    double s = 0;  // arc position of y
    double t = 0;  // arc position of z
};

/// One straight piece of U: y sweeps edge y_edge over tau in [tau0, tau1]
/// (arc length from the edge's start), z stays on z_edge and u on u_edge.
struct UPiece {
    std::size_t y_edge = 0, z_edge = 0, u_edge = 0;
    double tau0 = 0, tau1 = 0;
    // alpha(tau) = alpha0 + alpha1 * tau is z's parameter on z_edge; beta likewise for u.
    double alpha0 = 0, alpha1 = 0, beta0 = 0, beta1 = 0;

    Point y(const Polygon& poly, double tau) const;
    Point z(const Polygon& poly, double tau) const;
    Point u(const Polygon& poly, double tau) const;
    TorusPoint at(const Polygon& poly, double tau) const;
};

struct TorusCurve {
    /// Lifted closed polyline: points.back() = points.front() + period * winding.
    std::vector<TorusPoint> points;
    /// Pieces in traversal order; reversed pieces run from tau1 to tau0.
    std::vector<UPiece> pieces;
    std::vector<bool> reversed;
    double period = 0;
    std::array<long long, 2> winding{0, 0};
};

struct RightIsoscelesTriangle {
    Point y, z, u;
    double leg = 0;
};

/// z's with (y, z) in U: the intersections of X and rotate(X, y, +1) other than y.
std::vector<Point> u_fiber(const Polygon& poly, const Point& y);

/// All pieces of U, excluding the trivial fixed point z = y.
std::vector<UPiece> u_pieces(const Polygon& poly);

/// Closed components of U, oriented so the winding is (p > 0) or (p = 0, q >= 0).
std::vector<TorusCurve> trace_U(const Polygon& poly);

/// Lifted displacement over the period. Throws if the polyline does not close.
std::array<long long, 2> winding(const TorusCurve& curve);

/// Minimum torus distance from the curves to the diagonal {s = t}.
double diagonal_clearance(const std::vector<TorusCurve>& curves);

RightIsoscelesTriangle smallest_right_isosceles(const Polygon& poly);

/// Squares recovered from the crossings of U with its image under (y, z) -> (u, y).
std::vector<InscribedSquare> squares_from_UV(const Polygon& poly);

}  // namespace squarepeg
