#pragma once

// Planar primitives and predicates shared by every other module.
//
// Everything here is a template on the scalar type and operates on
// Eigen::Matrix<Scalar, 2, 1>. The library itself instantiates double; tests
// also exercise long double to keep the templates honest.

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "squarepeg/errors.hpp"

namespace squarepeg {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Point = Vec2<double>;

/// Default relative on-boundary tolerance; multiply by the polygon diameter.
inline constexpr double kEpsOn = 1e-9;

template <typename Scalar>
inline Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
inline bool is_finite(const Vec2<Scalar>& p)
{
    using std::isfinite;
    return isfinite(p.x()) && isfinite(p.y());
}

/// Exact counterclockwise quarter turn, [[0,-1],[1,0]].
template <typename Scalar>
inline Vec2<Scalar> quarter_ccw(const Vec2<Scalar>& v)
{
    return Vec2<Scalar>(-v.y(), v.x());
}

/// Exact clockwise quarter turn, [[0,1],[-1,0]].
template <typename Scalar>
inline Vec2<Scalar> quarter_cw(const Vec2<Scalar>& v)
{
    return Vec2<Scalar>(v.y(), -v.x());
}

/// Rotates p about center by quarter_turns * pi/2, counterclockwise in y-up
/// coordinates. Only coefficient swaps and negations are involved.
template <typename Scalar>
Vec2<Scalar> rotate(const Vec2<Scalar>& p, const Vec2<Scalar>& center, int quarter_turns)
{
    const Vec2<Scalar> d = p - center;
    switch (((quarter_turns % 4) + 4) % 4) {
    case 1:
        return center + quarter_ccw(d);
    case 2:
        return center - d;
    case 3:
        return center + quarter_cw(d);
    default:
        return p;
    }
}

template <typename Scalar>
struct BasicSegment {
    Vec2<Scalar> a;
    Vec2<Scalar> b;

    BasicSegment(const Vec2<Scalar>& a_, const Vec2<Scalar>& b_) : a(a_), b(b_)
    {
        if (!is_finite(a) || !is_finite(b))
            throw Error(ErrorKind::InvalidInput, "segment endpoint is not finite");
        const Scalar scale = std::max<Scalar>({Scalar(1), a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
        if ((b - a).norm() <= Scalar(kEpsOn) * scale)
            throw Error(ErrorKind::InvalidInput, "degenerate segment");
    }

    Vec2<Scalar> direction() const { return b - a; }
    Scalar length() const { return (b - a).norm(); }
    Vec2<Scalar> at(Scalar t) const { return a + t * (b - a); }
};

/// Line {p : n.p = d} with a unit normal.
template <typename Scalar>
struct BasicLine {
    Vec2<Scalar> n;
    Scalar d;

    BasicLine(const Vec2<Scalar>& normal, Scalar offset)
    {
        using std::isfinite;
        const Scalar len = normal.norm();
        if (!is_finite(normal) || !isfinite(offset) || !(len > Scalar(0)))
            throw Error(ErrorKind::InvalidInput, "line needs a finite nonzero normal");
        n = normal / len;
        d = offset / len;
    }

    /// a*x + b*y = c
    static BasicLine from_coefficients(Scalar a, Scalar b, Scalar c) { return BasicLine(Vec2<Scalar>(a, b), c); }

    static BasicLine through(const Vec2<Scalar>& p, const Vec2<Scalar>& q)
    {
        const Vec2<Scalar> normal = quarter_ccw(Vec2<Scalar>(q - p));
        return BasicLine(normal, normal.dot(p));
    }

    static BasicLine supporting(const BasicSegment<Scalar>& s) { return through(s.a, s.b); }

    Scalar signed_distance(const Vec2<Scalar>& p) const { return n.dot(p) - d; }
    Vec2<Scalar> direction() const { return quarter_cw(n); }
    Vec2<Scalar> foot() const { return d * n; }

    bool operator==(const BasicLine& o) const
    {
        using std::abs;
        const Scalar tol(1e-12);
        const bool same = (n - o.n).cwiseAbs().maxCoeff() <= tol && abs(d - o.d) <= tol * std::max(Scalar(1), abs(d));
        const bool flipped = (n + o.n).cwiseAbs().maxCoeff() <= tol && abs(d + o.d) <= tol * std::max(Scalar(1), abs(d));
        return same || flipped;
    }
};

template <typename Scalar>
class BasicPolygon {
public:
    using Vec = Vec2<Scalar>;

    BasicPolygon() = default;

    /// Validates finiteness, n >= 3 and edge lengths; simplicity is checked
    /// separately by is_simple() so that invalid shapes can still be inspected.
    explicit BasicPolygon(std::vector<Vec> vertices) : vertices_(std::move(vertices))
    {
        if (vertices_.size() < 3)
            throw Error(ErrorKind::InvalidInput, "polygon needs at least 3 vertices");
        for (const Vec& v : vertices_)
            if (!is_finite(v))
                throw Error(ErrorKind::InvalidInput, "polygon vertex is not finite");

        diameter_ = 0;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            for (std::size_t j = i + 1; j < vertices_.size(); ++j)
                diameter_ = std::max<Scalar>(diameter_, (vertices_[i] - vertices_[j]).norm());

        arc_start_.resize(vertices_.size() + 1);
        arc_start_[0] = 0;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const Scalar len = (vertex(i + 1) - vertex(i)).norm();
            if (!(len > Scalar(kEpsOn) * diameter_))
                throw Error(ErrorKind::InvalidInput, "zero-length edge at vertex " + std::to_string(i));
            arc_start_[i + 1] = arc_start_[i] + len;
        }
    }

    std::size_t size() const noexcept { return vertices_.size(); }
    const std::vector<Vec>& vertices() const noexcept { return vertices_; }

    /// Vertex with cyclic indexing.
    const Vec& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
    BasicSegment<Scalar> edge(std::size_t i) const { return BasicSegment<Scalar>(vertex(i), vertex(i + 1)); }
    Vec edge_vector(std::size_t i) const { return vertex(i + 1) - vertex(i); }
    Scalar edge_length(std::size_t i) const { return arc_start_[i + 1] - arc_start_[i]; }
    BasicLine<Scalar> edge_line(std::size_t i) const { return BasicLine<Scalar>::through(vertex(i), vertex(i + 1)); }

    /// Arc-length position of vertex i (i in [0, n]).
    Scalar arc_start(std::size_t i) const { return arc_start_[i]; }
    Scalar perimeter() const noexcept { return arc_start_.back(); }
    Scalar diameter() const noexcept { return diameter_; }
    Scalar eps_on() const noexcept { return Scalar(kEpsOn) * diameter_; }

    std::size_t next(std::size_t i) const noexcept { return (i + 1) % vertices_.size(); }
    std::size_t prev(std::size_t i) const noexcept { return (i + vertices_.size() - 1) % vertices_.size(); }

    bool operator==(const BasicPolygon& o) const { return vertices_ == o.vertices_; }

private:
    std::vector<Vec> vertices_;
    std::vector<Scalar> arc_start_;
    Scalar diameter_ = 0;
};

using Segment = BasicSegment<double>;
using Line = BasicLine<double>;
using Polygon = BasicPolygon<double>;

/// Shoelace sum; positive for counterclockwise orientation.
template <typename Scalar>
Scalar signed_area(const BasicPolygon<Scalar>& poly)
{
    Scalar twice = 0;
    const Vec2<Scalar>& o = poly.vertex(0);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i)
        twice += cross(Vec2<Scalar>(poly.vertex(i) - o), Vec2<Scalar>(poly.vertex(i + 1) - o));
    return twice / 2;
}

/// Applies p -> A p + b to every vertex.
template <typename Scalar>
BasicPolygon<Scalar> transformed(const BasicPolygon<Scalar>& poly, const Eigen::Matrix<Scalar, 2, 2>& A,
                                 const Vec2<Scalar>& b)
{
    std::vector<Vec2<Scalar>> out;
    out.reserve(poly.size());
    for (const auto& v : poly.vertices())
        out.push_back(A * v + b);
    return BasicPolygon<Scalar>(std::move(out));
}

template <typename Scalar>
BasicPolygon<Scalar> reversed(const BasicPolygon<Scalar>& poly)
{
    std::vector<Vec2<Scalar>> out(poly.vertices().rbegin(), poly.vertices().rend());
    return BasicPolygon<Scalar>(std::move(out));
}

/// Same boundary with vertex `start` relabelled as vertex 0.
template <typename Scalar>
BasicPolygon<Scalar> relabeled(const BasicPolygon<Scalar>& poly, std::size_t start)
{
    std::vector<Vec2<Scalar>> out;
    for (std::size_t i = 0; i < poly.size(); ++i)
        out.push_back(poly.vertex(start + i));
    return BasicPolygon<Scalar>(std::move(out));
}

template <typename Scalar>
struct BasicIntersection {
    enum class Kind { None, Point, Overlap };
    Kind kind = Kind::None;
    Vec2<Scalar> p = Vec2<Scalar>::Zero();  // crossing point, or overlap start
    Vec2<Scalar> q = Vec2<Scalar>::Zero();  // overlap end

    explicit operator bool() const noexcept { return kind != Kind::None; }
};

using Intersection = BasicIntersection<double>;

/// Intersects two closed segments. `tol` is dimensionless: segments count as
/// parallel when the sine of their angle is below tol, and endpoint parameters
/// are accepted with a slack of tol.
template <typename Scalar>
BasicIntersection<Scalar> segment_intersection(const BasicSegment<Scalar>& s1, const BasicSegment<Scalar>& s2,
                                               Scalar tol)
{
    using std::abs;
    using Result = BasicIntersection<Scalar>;
    const Vec2<Scalar> d1 = s1.direction();
    const Vec2<Scalar> d2 = s2.direction();
    const Vec2<Scalar> r = s2.a - s1.a;
    const Scalar denom = cross(d1, d2);
    const Scalar n1 = d1.norm(), n2 = d2.norm();

    if (abs(denom) <= tol * n1 * n2) {
        // Parallel: collinear only if s2 lies on the line of s1 (and vice versa).
        const Scalar off1 = abs(cross(d1, r)) / n1;
        const Scalar off2 = abs(cross(d2, r)) / n2;
        if (std::max(off1, off2) > tol * std::max(n1, n2))
            return {};
        // Work in a direction fixed independently of argument order.
        Vec2<Scalar> axis = d1;
        if (d2.x() > d1.x() || (d2.x() == d1.x() && d2.y() > d1.y()))
            axis = d2;
        axis /= axis.norm();
        auto proj = [&](const Vec2<Scalar>& p) { return axis.dot(p); };
        const Scalar lo1 = std::min(proj(s1.a), proj(s1.b)), hi1 = std::max(proj(s1.a), proj(s1.b));
        const Scalar lo2 = std::min(proj(s2.a), proj(s2.b)), hi2 = std::max(proj(s2.a), proj(s2.b));
        const Scalar lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
        const Scalar slack = tol * std::max(n1, n2);
        if (hi < lo - slack)
            return {};
        auto pick = [&](Scalar coord) {
            // Point on the union of both segments' endpoints closest to coord.
            const Vec2<Scalar> cands[4] = {s1.a, s1.b, s2.a, s2.b};
            Vec2<Scalar> best = cands[0];
            Scalar bd = abs(proj(best) - coord);
            for (const auto& c : cands)
                if (abs(proj(c) - coord) < bd) {
                    bd = abs(proj(c) - coord);
                    best = c;
                }
            return best;
        };
        Result res;
        res.p = pick(lo);
        res.q = pick(hi);
        res.kind = (hi - lo <= slack) ? Result::Kind::Point : Result::Kind::Overlap;
        if (res.kind == Result::Kind::Point)
            res.q = res.p;
        return res;
    }

    const Scalar t = cross(r, d2) / denom;
    const Scalar u = cross(r, d1) / denom;
    if (t < -tol || t > 1 + tol || u < -tol || u > 1 + tol)
        return {};
    Result res;
    res.kind = Result::Kind::Point;
    res.p = (s1.at(t) + s2.at(u)) / 2;
    res.q = res.p;
    return res;
}

/// Distance from p to a closed segment, and the clamped parameter of the foot.
template <typename Scalar>
std::pair<Scalar, Scalar> distance_to_segment(const Vec2<Scalar>& p, const Vec2<Scalar>& a, const Vec2<Scalar>& b)
{
    const Vec2<Scalar> d = b - a;
    Scalar t = d.dot(p - a) / d.squaredNorm();
    t = std::clamp(t, Scalar(0), Scalar(1));
    return {(a + t * d - p).norm(), t};
}

template <typename Scalar>
Scalar distance_to_boundary(const Vec2<Scalar>& p, const BasicPolygon<Scalar>& poly)
{
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i)
        best = std::min(best, distance_to_segment(p, poly.vertex(i), poly.vertex(i + 1)).first);
    return best;
}

enum class Location { Inside, Outside, Boundary };

/// Classifies p against the closed region bounded by poly. Points within
/// tol * diameter of the boundary are reported as Boundary.
template <typename Scalar>
Location point_location(const Vec2<Scalar>& p, const BasicPolygon<Scalar>& poly, Scalar tol)
{
    if (distance_to_boundary(p, poly) <= tol * poly.diameter())
        return Location::Boundary;
    // Winding number by signed upward/downward crossings.
    int winding = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2<Scalar>& a = poly.vertex(i);
        const Vec2<Scalar>& b = poly.vertex(i + 1);
        const Scalar side = cross(Vec2<Scalar>(b - a), Vec2<Scalar>(p - a));
        if (a.y() <= p.y()) {
            if (b.y() > p.y() && side > 0)
                ++winding;
        } else if (b.y() <= p.y() && side < 0) {
            --winding;
        }
    }
    return winding != 0 ? Location::Inside : Location::Outside;
}

struct SimplicityReport {
    bool simple = true;
    std::vector<std::pair<std::size_t, std::size_t>> offending;  // edge index pairs (i < j)
};

/// True iff non-adjacent edges are disjoint and adjacent edges meet only at
/// their shared vertex. O(n^2) with a bounding-box prefilter.
template <typename Scalar>
SimplicityReport is_simple(const BasicPolygon<Scalar>& poly)
{
    const std::size_t n = poly.size();
    const Scalar tol(1e-12);
    SimplicityReport report;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ei = poly.edge(i);
        const Eigen::AlignedBox<Scalar, 2> bi = Eigen::AlignedBox<Scalar, 2>(ei.a).extend(ei.b);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto ej = poly.edge(j);
            Eigen::AlignedBox<Scalar, 2> bj = Eigen::AlignedBox<Scalar, 2>(ej.a).extend(ej.b);
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (!adjacent && !bi.intersects(bj))
                continue;
            const auto hit = segment_intersection(ei, ej, tol);
            bool bad = false;
            if (adjacent)
                bad = hit.kind == BasicIntersection<Scalar>::Kind::Overlap;
            else
                bad = static_cast<bool>(hit);
            if (bad) {
                report.simple = false;
                report.offending.emplace_back(i, j);
            }
        }
    }
    return report;
}

/// Interior angle at every vertex, in (0, 2pi), independent of orientation.
template <typename Scalar>
std::vector<Scalar> interior_angles(const BasicPolygon<Scalar>& poly)
{
    using std::atan2;
    const Scalar orient = signed_area(poly) > 0 ? Scalar(1) : Scalar(-1);
    std::vector<Scalar> out(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2<Scalar> din = poly.edge_vector(poly.prev(i));
        const Vec2<Scalar> dout = poly.edge_vector(i);
        const Scalar turn = atan2(cross(din, dout), din.dot(dout));
        out[i] = std::numbers::pi_v<Scalar> - orient * turn;
    }
    return out;
}

/// Wraps an arc-length coordinate into [0, L).
template <typename Scalar>
Scalar wrap_arc(Scalar s, Scalar L)
{
    using std::fmod;
    Scalar w = fmod(s, L);
    if (w < 0)
        w += L;
    if (w >= L)
        w = 0;
    return w;
}

/// Point at arc length s from vertex 0; a vertex belongs to its outgoing edge.
template <typename Scalar>
std::pair<Vec2<Scalar>, std::size_t> boundary_point(const BasicPolygon<Scalar>& poly, Scalar s)
{
    const Scalar w = wrap_arc(s, poly.perimeter());
    std::size_t lo = 0, hi = poly.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (poly.arc_start(mid) <= w)
            lo = mid;
        else
            hi = mid;
    }
    const Scalar t = (w - poly.arc_start(lo)) / poly.edge_length(lo);
    return {poly.edge(lo).at(t), lo};
}

/// Arc-length coordinate of the point at parameter t on edge i.
template <typename Scalar>
Scalar arc_of(const BasicPolygon<Scalar>& poly, std::size_t edge, Scalar t)
{
    return poly.arc_start(edge) + t * poly.edge_length(edge);
}

}  // namespace squarepeg
