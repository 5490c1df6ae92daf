#pragma once

// The unique clockwise square with vertex a_k on line l_k.
//
// Primary route: a 4x4 linear system in the center c and the half-diagonal
// w = a_1 - c, where a_k = c + R^(k-1) w and R is the clockwise quarter turn.
// Row k reads n_k . c + ((R^T)^(k-1) n_k) . w = d_k. Repeated lines are fine.
//
// Cross-check route: the rotation construction (rotate l_4 about a point of
// l_1, intersect with l_2, complete the square, and intersect the traced line
// of the fourth corner with l_3). It degenerates when l_2 is perpendicular
// to l_4 even if the square is unique.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

#include "squarepeg/geom.hpp"

namespace squarepeg {

inline constexpr double kEpsDet = 1e-12;
inline constexpr double kEpsW = 1e-10;

template <typename Scalar>
struct BasicSquare {
    Vec2<Scalar> c = Vec2<Scalar>::Zero();  // center
    Vec2<Scalar> w = Vec2<Scalar>::Zero();  // c -> a_1

    /// a_(k+1) = c + R^k w, k = 0..3, R the clockwise quarter turn.
    Vec2<Scalar> vertex(int k) const
    {
        switch (((k % 4) + 4) % 4) {
        case 1:
            return c + quarter_cw(w);
        case 2:
            return c - w;
        case 3:
            return c + quarter_ccw(w);
        default:
            return c + w;
        }
    }

    std::array<Vec2<Scalar>, 4> vertices() const { return {vertex(0), vertex(1), vertex(2), vertex(3)}; }

    /// Side length, sqrt(2) |w|.
    Scalar side() const { return w.norm() * std::numbers::sqrt2_v<Scalar>; }

    static BasicSquare from_vertices(const std::array<Vec2<Scalar>, 4>& v)
    {
        BasicSquare sq;
        sq.c = (v[0] + v[1] + v[2] + v[3]) / Scalar(4);
        sq.w = v[0] - sq.c;
        return sq;
    }
};

using Square = BasicSquare<double>;

enum class SolveKind { Unique, PointSquare, Singular };

template <typename Scalar>
struct BasicSolveResult {
    SolveKind kind = SolveKind::Singular;
    BasicSquare<Scalar> square;                           // valid for Unique
    Vec2<Scalar> point = Vec2<Scalar>::Zero();            // valid for PointSquare
    Scalar det = 0;                                       // linear-system determinant, when computed
    std::string reason;                                   // diagnostic for Singular

    bool unique() const noexcept { return kind == SolveKind::Unique; }
};

using SolveResult = BasicSolveResult<double>;

template <typename Scalar>
using LineQuad = std::array<BasicLine<Scalar>, 4>;

/// max(1, |d_k|): the length scale shared by the solver thresholds.
template <typename Scalar>
Scalar line_scale(const LineQuad<Scalar>& lines)
{
    using std::abs;
    Scalar s(1);
    for (const auto& l : lines)
        s = std::max(s, abs(l.d));
    return s;
}

/// line_scale widened by the coordinate magnitude of a solution's vertices.
template <typename Scalar>
Scalar solution_scale(const LineQuad<Scalar>& lines, const BasicSquare<Scalar>& sq)
{
    Scalar s = line_scale(lines);
    for (int k = 0; k < 4; ++k)
        s = std::max(s, sq.vertex(k).cwiseAbs().maxCoeff());
    return s;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> square_system_matrix(const LineQuad<Scalar>& lines)
{
    Eigen::Matrix<Scalar, 4, 4> M;
    for (int k = 0; k < 4; ++k) {
        Vec2<Scalar> rn = lines[k].n;
        for (int r = 0; r < k; ++r)
            rn = quarter_ccw(rn);
        M.row(k) << lines[k].n.x(), lines[k].n.y(), rn.x(), rn.y();
    }
    return M;
}

template <typename Scalar>
BasicSolveResult<Scalar> classify_solution(const Vec2<Scalar>& c, const Vec2<Scalar>& w, Scalar scale)
{
    BasicSolveResult<Scalar> res;
    if (w.norm() <= Scalar(kEpsW) * scale) {
        res.kind = SolveKind::PointSquare;
        res.point = c;
    } else {
        res.kind = SolveKind::Unique;
        res.square.c = c;
        res.square.w = w;
    }
    return res;
}

template <typename Scalar>
BasicSolveResult<Scalar> square_through_lines(const LineQuad<Scalar>& lines)
{
    using std::abs;
    const Eigen::Matrix<Scalar, 4, 4> M = square_system_matrix(lines);
    const Eigen::Matrix<Scalar, 4, 1> rhs(lines[0].d, lines[1].d, lines[2].d, lines[3].d);

    const Eigen::FullPivLU<Eigen::Matrix<Scalar, 4, 4>> lu(M);
    const Scalar det = lu.determinant();
    const Scalar mscale = M.cwiseAbs().maxCoeff();
    if (abs(det) < Scalar(kEpsDet) * mscale * mscale * mscale * mscale) {
        BasicSolveResult<Scalar> res;
        res.det = det;
        res.reason = "singular line system";
        return res;
    }
    const Eigen::Matrix<Scalar, 4, 1> x = lu.solve(rhs);
    auto res = classify_solution<Scalar>(x.template head<2>(), x.template tail<2>(), line_scale(lines));
    res.det = det;
    return res;
}

template <typename Scalar>
BasicSolveResult<Scalar> square_through_lines(const BasicLine<Scalar>& l1, const BasicLine<Scalar>& l2,
                                              const BasicLine<Scalar>& l3, const BasicLine<Scalar>& l4)
{
    return square_through_lines(LineQuad<Scalar>{l1, l2, l3, l4});
}

namespace detail {

template <typename Scalar>
bool solve2(const Vec2<Scalar>& n1, Scalar d1, const Vec2<Scalar>& n2, Scalar d2, Vec2<Scalar>& out)
{
    using std::abs;
    const Scalar det = cross(n1, n2);
    if (abs(det) <= Scalar(kEpsDet) * n1.norm() * n2.norm())
        return false;
    out = Vec2<Scalar>((d1 * n2.y() - d2 * n1.y()) / det, (n1.x() * d2 - n2.x() * d1) / det);
    return true;
}

}  // namespace detail

/// The rotation construction. Requires l2 not perpendicular to l4 and
/// pairwise distinct lines; violations come back as Singular with a reason.
template <typename Scalar>
BasicSolveResult<Scalar> square_by_rotation_construction(const LineQuad<Scalar>& lines)
{
    using std::abs;
    const auto& [l1, l2, l3, l4] = lines;
    BasicSolveResult<Scalar> singular;

    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (lines[i] == lines[j]) {
                singular.reason = "repeated line";
                return singular;
            }
    if (abs(l2.n.dot(l4.n)) <= Scalar(kEpsDet)) {
        singular.reason = "l2 perpendicular to l4";
        return singular;
    }

    // Corners for a given position of the first vertex on l1. The rotated
    // line l4' = {p : rotate(p, z1, -1) in l4} has normal ccw(n4).
    struct Corners {
        Vec2<Scalar> z1, z2, z3, z4;
    };
    auto corners = [&](Scalar tau) -> Corners {
        Corners k;
        k.z1 = l1.foot() + tau * l1.direction();
        const Vec2<Scalar> n4r = quarter_ccw(l4.n);
        const Scalar d4r = l4.d - l4.n.dot(k.z1) + n4r.dot(k.z1);
        detail::solve2(l2.n, l2.d, n4r, d4r, k.z2);
        k.z4 = rotate(k.z2, k.z1, -1);
        k.z3 = k.z2 + k.z4 - k.z1;
        return k;
    };

    const Scalar scale = line_scale(lines);
    const Corners c0 = corners(Scalar(0));
    const Corners c1 = corners(scale);
    const Vec2<Scalar> traced = (c1.z3 - c0.z3) / scale;  // direction of l3'
    const Scalar along = l3.n.dot(traced);
    if (traced.norm() <= Scalar(kEpsDet) || abs(along) <= Scalar(kEpsDet) * traced.norm()) {
        singular.reason = "l3 parallel to traced line";
        return singular;
    }
    const Scalar tau = (l3.d - l3.n.dot(c0.z3)) / along;
    const Corners k = corners(tau);
    return classify_solution<Scalar>(Vec2<Scalar>((k.z1 + k.z3) / 2), Vec2<Scalar>(k.z1 - (k.z1 + k.z3) / 2),
                                     scale);
}

/// Line l3' traced by the fourth corner; exposed for tests that need a line
/// parallel to it.
template <typename Scalar>
Vec2<Scalar> traced_third_line_direction(const LineQuad<Scalar>& lines)
{
    const auto& l1 = lines[0];
    const auto& l2 = lines[1];
    const auto& l4 = lines[3];
    auto z3 = [&](Scalar tau) {
        const Vec2<Scalar> z1 = l1.foot() + tau * l1.direction();
        const Vec2<Scalar> n4r = quarter_ccw(l4.n);
        Vec2<Scalar> z2;
        detail::solve2(l2.n, l2.d, n4r, Scalar(l4.d - l4.n.dot(z1) + n4r.dot(z1)), z2);
        return Vec2<Scalar>(z2 + rotate(z2, z1, -1) - z1);
    };
    return z3(Scalar(1)) - z3(Scalar(0));
}

/// Incidences within tol*scale, equal sides within tol*scale, clockwise.
template <typename Scalar>
bool verify_square(const BasicSquare<Scalar>& sq, const LineQuad<Scalar>& lines, Scalar tol)
{
    using std::abs;
    const Scalar scale = solution_scale(lines, sq);
    const auto v = sq.vertices();
    for (int k = 0; k < 4; ++k)
        if (abs(lines[k].signed_distance(v[k])) > tol * scale)
            return false;
    const Scalar s0 = (v[1] - v[0]).norm();
    for (int k = 1; k < 4; ++k)
        if (abs((v[(k + 1) % 4] - v[k]).norm() - s0) > tol * scale)
            return false;
    Scalar twice_area = 0;
    for (int k = 0; k < 4; ++k)
        twice_area += cross(v[k], v[(k + 1) % 4]);
    return twice_area < 0;
}

}  // namespace squarepeg
