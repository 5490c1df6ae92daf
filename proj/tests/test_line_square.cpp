#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "squarepeg/line_square.hpp"

using namespace squarepeg;
using namespace squarepeg::testing;

namespace {

Line L(double a, double b, double c) { return Line::from_coefficients(a, b, c); }

// Cofactor-expansion determinant, independent of Eigen's LU.
double det4(const Eigen::Matrix4d& m)
{
    auto det3 = [&](int skip_col) {
        int cols[3], k = 0;
        for (int c = 0; c < 4; ++c)
            if (c != skip_col)
                cols[k++] = c;
        auto e = [&](int r, int c) { return m(r + 1, cols[c]); };
        return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
               e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    };
    double d = 0;
    for (int c = 0; c < 4; ++c)
        d += ((c % 2) ? -1 : 1) * m(0, c) * det3(c);
    return d;
}

LineQuad<double> random_quad(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), off(-3, 3);
    LineQuad<double> q{L(1, 0, 0), L(1, 0, 0), L(1, 0, 0), L(1, 0, 0)};
    for (auto& l : q) {
        const double a = ang(rng);
        l = Line(Point(std::cos(a), std::sin(a)), off(rng));
    }
    return q;
}

double max_vertex_gap(const Square& a, const Square& b)
{
    double m = 0;
    for (int k = 0; k < 4; ++k)
        m = std::max(m, (a.vertex(k) - b.vertex(k)).norm());
    return m;
}

}  // namespace

TEST_CASE("square vertex convention is clockwise")
{
    Square sq;
    sq.c = Point(1, -1);
    sq.w = Point(-1, 1);
    CHECK(sq.vertex(0) == Point(0, 0));
    CHECK(sq.vertex(1) == Point(2, 0));
    CHECK(sq.vertex(2) == Point(2, -2));
    CHECK(sq.vertex(3) == Point(0, -2));
}

TEST_CASE("square_through_lines: worked example")
{
    const LineQuad<double> lines{L(1, -1, 0), L(1, 2, 2), L(3, -1, 8), L(1, -3, 6)};
    const auto res = square_through_lines(lines);
    REQUIRE(res.kind == SolveKind::Unique);
    // Frozen from substitution: (0,0) on x-y=0, (2,0) on x+2y=2,
    // (2,-2) on 3x-y=8, (0,-2) on x-3y=6.
    const Point expected[4] = {{0, 0}, {2, 0}, {2, -2}, {0, -2}};
    for (int k = 0; k < 4; ++k)
        CHECK((res.square.vertex(k) - expected[k]).norm() < 1e-12);
    CHECK((res.square.c - Point(1, -1)).norm() < 1e-12);
    CHECK((res.square.w - Point(-1, 1)).norm() < 1e-12);
    CHECK(verify_square(res.square, lines, 1e-9));
}

TEST_CASE("square_through_lines: square of side-lines is singular")
{
    const LineQuad<double> lines{L(0, 1, 0), L(1, 0, 1), L(0, 1, 1), L(1, 0, 0)};
    const Eigen::Matrix4d M = square_system_matrix(lines);
    CHECK(M.col(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(det4(M) == 0.0);
    CHECK(square_through_lines(lines).kind == SolveKind::Singular);
}

TEST_CASE("square_through_lines: concurrent lines give a point square")
{
    // slopes 0, 1, inf, -1 through the origin; this assignment has det -4
    // with unnormalized normals (-1 after normalization).
    const LineQuad<double> lines{L(0, 1, 0), L(1, -1, 0), L(1, 0, 0), L(1, 1, 0)};
    CHECK(std::abs(det4(square_system_matrix(lines))) > 0.5);
    const auto res = square_through_lines(lines);
    REQUIRE(res.kind == SolveKind::PointSquare);
    CHECK(res.point.norm() < 1e-12);
}

TEST_CASE("rotation construction")
{
    SUBCASE("agrees on the worked example")
    {
        const LineQuad<double> lines{L(1, -1, 0), L(1, 2, 2), L(3, -1, 8), L(1, -3, 6)};
        const auto a = square_through_lines(lines);
        const auto b = square_by_rotation_construction(lines);
        REQUIRE(b.kind == SolveKind::Unique);
        CHECK(max_vertex_gap(a.square, b.square) <= 1e-8 * solution_scale(lines, a.square));
    }
    SUBCASE("perpendicular l2, l4 degenerate only this route")
    {
        const LineQuad<double> lines{L(1, -1, 0), L(1, 0, 1), L(2, -1, -3), L(0, 1, -5)};
        Eigen::Matrix4d raw;
        raw << 1, -1, 1, -1, 1, 0, 0, 1, 2, -1, -2, 1, 0, 1, 1, 0;
        CHECK(det4(raw) == doctest::Approx(4));
        const auto linear = square_through_lines(lines);
        REQUIRE(linear.kind == SolveKind::Unique);
        CHECK(verify_square(linear.square, lines, 1e-9));
        CHECK((linear.square.vertex(0) - Point(-2, -2)).norm() < 1e-12);
        const auto rot = square_by_rotation_construction(lines);
        CHECK(rot.kind == SolveKind::Singular);
        CHECK(rot.reason == "l2 perpendicular to l4");
    }
    SUBCASE("l3 parallel to the traced line")
    {
        LineQuad<double> lines{L(1, -1, 0), L(1, 2, 2), L(3, -1, 8), L(1, -3, 6)};
        const Point dir = traced_third_line_direction(lines);
        lines[2] = Line(quarter_ccw(dir), 1.5);
        const auto rot = square_by_rotation_construction(lines);
        CHECK(rot.kind == SolveKind::Singular);
        CHECK(rot.reason == "l3 parallel to traced line");
    }
    SUBCASE("repeated lines are outside its domain")
    {
        const LineQuad<double> lines{L(0, 1, 0), L(0, 1, 0), L(1, 1, 4), L(1, 0, 0)};
        CHECK(square_by_rotation_construction(lines).kind == SolveKind::Singular);
    }
}

TEST_CASE("verify_square")
{
    const LineQuad<double> lines{L(1, -1, 0), L(1, 2, 2), L(3, -1, 8), L(1, -3, 6)};
    const Square sq = square_through_lines(lines).square;
    CHECK(verify_square(sq, lines, 1e-9));
    CHECK_FALSE(verify_square(sq, LineQuad<double>{lines[1], lines[0], lines[2], lines[3]}, 1e-9));
    Square big = sq;
    big.w *= 1 + 10 * 1e-9;
    CHECK_FALSE(verify_square(big, lines, 1e-9));
}

TEST_CASE("random quadruples: incidences and cross-method agreement")
{
    std::mt19937_64 rng(2024);
    int unique = 0, compared = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto lines = random_quad(rng);
        const auto a = square_through_lines(lines);
        if (!a.unique())
            continue;
        ++unique;
        CHECK(verify_square(a.square, lines, 1e-9));
        const auto b = square_by_rotation_construction(lines);
        if (b.unique()) {
            ++compared;
            CHECK(max_vertex_gap(a.square, b.square) <= 1e-8 * solution_scale(lines, a.square));
        }
    }
    CHECK(unique > 950);
    CHECK(compared > 900);
}

TEST_CASE("equivariance and scaling")
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const auto lines = random_quad(rng);
        const auto base = square_through_lines(lines);
        if (!base.unique() || std::abs(base.det) < 1e-3)
            continue;
        const Rigid m = random_rigid(rng);
        LineQuad<double> moved = lines;
        for (auto& l : moved) {
            const Point p = m(l.foot());
            const Point n = m.A * l.n;
            l = Line(n, n.dot(p));
        }
        const auto res = square_through_lines(moved);
        REQUIRE(res.unique());
        for (int k = 0; k < 4; ++k)
            CHECK((res.square.vertex(k) - m(base.square.vertex(k))).norm() <= 1e-9 * line_scale(moved));

        LineQuad<double> scaled = lines;
        for (auto& l : scaled)
            l.d *= 2.5;
        const auto s = square_through_lines(scaled);
        REQUIRE(s.unique());
        CHECK((s.square.c - 2.5 * base.square.c).norm() <= 1e-9 * line_scale(scaled));
        CHECK((s.square.w - 2.5 * base.square.w).norm() <= 1e-9 * line_scale(scaled));
    }
}

TEST_CASE("repeated line: one side lies on it")
{
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        auto lines = random_quad(rng);
        lines[1] = lines[0];
        const auto res = square_through_lines(lines);
        if (!res.unique())
            continue;
        ++checked;
        const double scale = line_scale(lines);
        CHECK(std::abs(lines[0].signed_distance(res.square.vertex(0))) <= 1e-9 * scale);
        CHECK(std::abs(lines[0].signed_distance(res.square.vertex(1))) <= 1e-9 * scale);
    }
    CHECK(checked > 250);
}

TEST_CASE("finite-difference smoke check of smoothness")
{
    const LineQuad<double> lines{L(1, -1, 0), L(1, 2, 2), L(3, -1, 8), L(1, -3, 6)};
    const auto base = square_through_lines(lines).square;
    for (int k = 0; k < 4; ++k) {
        LineQuad<double> a = lines, b = lines;
        a[k].d += 1e-6;
        b[k].d -= 1e-6;
        const auto sa = square_through_lines(a).square, sb = square_through_lines(b).square;
        const Point central = (sa.c - sb.c) / 2e-6;
        LineQuad<double> c = lines;
        c[k].d += 1e-3;
        const auto sc = square_through_lines(c).square;
        // Linear in offsets, so the secant over a large step matches the derivative.
        CHECK((central - (sc.c - base.c) / 1e-3).norm() < 1e-6);
    }
}

TEST_CASE("solver templates on long double")
{
    using LL = BasicLine<long double>;
    using V = Vec2<long double>;
    const LineQuad<long double> lines{LL(V(1, -1), 0), LL(V(1, 2), 2), LL(V(3, -1), 8), LL(V(1, -3), 6)};
    const auto res = square_through_lines(lines);
    REQUIRE(res.unique());
    CHECK((res.square.vertex(2) - V(2, -2)).norm() < 1e-15L);
    CHECK(verify_square(res.square, lines, 1e-12L));
}
