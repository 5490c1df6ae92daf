#include "squarepeg/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace squarepeg {

namespace {

Point minus_rotated(const Point& v) { return v - quarter_ccw(v); }  // (I - R) v

void require_no_orthogonal_edges(const Polygon& poly)
{
    for (std::size_t a = 0; a < poly.size(); ++a)
        for (std::size_t b = a + 1; b < poly.size(); ++b) {
            const Point ea = poly.edge_vector(a), eb = poly.edge_vector(b);
            if (std::abs(ea.dot(eb)) < 1e-9 * ea.norm() * eb.norm())
                throw Error(ErrorKind::NonGeneric,
                            "edges " + std::to_string(a) + " and " + std::to_string(b) + " are orthogonal");
        }
}

void require_obtuse(const Polygon& poly)
{
    const auto angles = interior_angles(poly);
    for (std::size_t i = 0; i < angles.size(); ++i)
        if (!(angles[i] > std::numbers::pi / 2 && angles[i] < 3 * std::numbers::pi / 2))
            throw Error(ErrorKind::PreconditionFailed,
                        "interior angle at vertex " + std::to_string(i) + " is not in (pi/2, 3pi/2)");
}

// Restricts [lo, hi] to {tau : 0 <= c0 + c1 tau <= 1}.
void clip_unit(double c0, double c1, double& lo, double& hi)
{
    if (c1 == 0) {
        if (c0 < 0 || c0 > 1)
            hi = lo - 1;
        return;
    }
    const double a = -c0 / c1, b = (1 - c0) / c1;
    lo = std::max(lo, std::min(a, b));
    hi = std::min(hi, std::max(a, b));
}

double wrapped(double x, double L) { return std::abs(x - L * std::round(x / L)); }

struct Endpoint {
    std::size_t piece;
    int end;  // 0 at tau0, 1 at tau1
    TorusPoint base;
};

}  // namespace

Point UPiece::y(const Polygon& poly, double tau) const
{
    return poly.vertex(y_edge) + tau * poly.edge_vector(y_edge) / poly.edge_length(y_edge);
}

Point UPiece::z(const Polygon& poly, double tau) const
{
    return poly.vertex(z_edge) + (alpha0 + alpha1 * tau) * poly.edge_vector(z_edge);
}

Point UPiece::u(const Polygon& poly, double tau) const
{
    return poly.vertex(u_edge) + (beta0 + beta1 * tau) * poly.edge_vector(u_edge);
}

TorusPoint UPiece::at(const Polygon& poly, double tau) const
{
    return {poly.arc_start(y_edge) + tau, poly.arc_start(z_edge) + (alpha0 + alpha1 * tau) * poly.edge_length(z_edge)};
}

std::vector<Point> u_fiber(const Polygon& poly, const Point& y)
{
    require_no_orthogonal_edges(poly);
    const double D = poly.diameter();
    if (distance_to_boundary(y, poly) > poly.eps_on())
        throw Error(ErrorKind::PreconditionFailed, "u_fiber: y is not on the polygon");
    std::vector<Point> turned;
    for (const Point& v : poly.vertices())
        turned.push_back(rotate(v, y, 1));
    const Polygon rotated(turned);

    auto near_vertex = [&](const Polygon& p, const Point& x) {
        for (const Point& v : p.vertices())
            if ((v - x).norm() <= 1e-9 * D)
                return true;
        return false;
    };

    std::vector<Point> out;
    for (std::size_t a = 0; a < poly.size(); ++a)
        for (std::size_t b = 0; b < rotated.size(); ++b) {
            const auto hit = segment_intersection(poly.edge(a), rotated.edge(b), 1e-12);
            if (hit.kind == Intersection::Kind::Overlap)
                throw Error(ErrorKind::NonGeneric, "u_fiber: X and its rotation overlap along a segment");
            if (hit.kind != Intersection::Kind::Point || (hit.p - y).norm() <= 1e-9 * D)
                continue;
            if (near_vertex(poly, hit.p) && near_vertex(rotated, hit.p))
                throw Error(ErrorKind::NonGeneric, "u_fiber: a vertex of the rotated polygon meets a vertex");
            const bool seen =
                std::any_of(out.begin(), out.end(), [&](const Point& z) { return (z - hit.p).norm() <= 1e-9 * D; });
            if (!seen)
                out.push_back(hit.p);
        }
    return out;
}

std::vector<UPiece> u_pieces(const Polygon& poly)
{
    require_no_orthogonal_edges(poly);
    const std::size_t n = poly.size();
    std::vector<UPiece> pieces;
    for (std::size_t i = 0; i < n; ++i) {
        const double len = poly.edge_length(i);
        const Point P = poly.vertex(i);
        const Point d = poly.edge_vector(i) / len;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (a == i && b == i)
                    continue;
                // z = A_a + alpha E_a = R (A_b + beta E_b) + (I - R) y(tau)
                Eigen::Matrix2d M;
                M.col(0) = poly.edge_vector(a);
                M.col(1) = -quarter_ccw(Point(poly.edge_vector(b)));
                const Eigen::Matrix2d Minv = M.inverse();
                const Point r0 = quarter_ccw(Point(poly.vertex(b))) + minus_rotated(P) - poly.vertex(a);
                const Point c0 = Minv * r0;
                const Point c1 = Minv * minus_rotated(d);
                double lo = 0, hi = len;
                clip_unit(c0.x(), c1.x(), lo, hi);
                clip_unit(c0.y(), c1.y(), lo, hi);
                if (hi - lo <= 1e-12 * len)
                    continue;
                pieces.push_back({i, a, b, lo, hi, c0.x(), c1.x(), c0.y(), c1.y()});
            }
    }
    return pieces;
}

std::array<long long, 2> winding(const TorusCurve& curve)
{
    if (curve.points.size() < 2 || !(curve.period > 0))
        throw Error(ErrorKind::InvalidInput, "winding: curve needs at least two points and a positive period");
    const double L = curve.period;
    const double gs = curve.points.back().s - curve.points.front().s;
    const double gt = curve.points.back().t - curve.points.front().t;
    const long long p = std::llround(gs / L), q = std::llround(gt / L);
    if (std::abs(gs - p * L) > 1e-6 * L || std::abs(gt - q * L) > 1e-6 * L)
        throw Error(ErrorKind::InvalidInput, "winding: curve is not closed");
    return {p, q};
}

std::vector<TorusCurve> trace_U(const Polygon& poly)
{
    const std::vector<UPiece> pieces = u_pieces(poly);
    const double L = poly.perimeter();
    const double tol = 1e-9 * L;

    std::vector<Endpoint> ends;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        ends.push_back({k, 0, pieces[k].at(poly, pieces[k].tau0)});
        ends.push_back({k, 1, pieces[k].at(poly, pieces[k].tau1)});
    }
    auto snapped = [&](double x) { return x > L - tol ? x - L : x; };

    // Group endpoints sitting on the same torus point.
    std::vector<std::size_t> order(ends.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return snapped(ends[a].base.s) < snapped(ends[b].base.s); });
    std::vector<std::size_t> group(ends.size(), std::numeric_limits<std::size_t>::max());
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t x = 0; x < order.size(); ++x) {
        const std::size_t e = order[x];
        if (group[e] != std::numeric_limits<std::size_t>::max())
            continue;
        group[e] = groups.size();
        groups.push_back({e});
        for (std::size_t y = x + 1; y < order.size(); ++y) {
            const std::size_t f = order[y];
            if (snapped(ends[f].base.s) - snapped(ends[e].base.s) > tol)
                break;
            if (group[f] == std::numeric_limits<std::size_t>::max() &&
                wrapped(ends[f].base.t - ends[e].base.t, L) <= tol) {
                group[f] = group[e];
                groups.back().push_back(f);
            }
        }
    }

    std::vector<std::size_t> partner(ends.size());
    for (const auto& g : groups) {
        const TorusPoint& at = ends[g.front()].base;
        const bool diagonal = wrapped(at.t - at.s, L) <= tol;
        if (g.size() == 2) {
            partner[g[0]] = g[1];
            partner[g[1]] = g[0];
            continue;
        }
        if (!diagonal || g.size() % 2 != 0)
            throw Error(ErrorKind::NonGeneric, "trace_U: " + std::to_string(g.size()) +
                                                   " pieces of U meet at one point (a vertex passes through a vertex)");
        // Curves through the diagonal: pair neighbours by outgoing angle.
        std::vector<std::pair<double, std::size_t>> dirs;
        for (std::size_t e : g) {
            const UPiece& pc = pieces[ends[e].piece];
            const TorusPoint other = pc.at(poly, ends[e].end == 0 ? pc.tau1 : pc.tau0);
            dirs.emplace_back(std::atan2(other.t - ends[e].base.t, other.s - ends[e].base.s), e);
        }
        std::sort(dirs.begin(), dirs.end());
        for (std::size_t k = 0; k < dirs.size(); k += 2) {
            partner[dirs[k].second] = dirs[k + 1].second;
            partner[dirs[k + 1].second] = dirs[k].second;
        }
    }

    std::vector<TorusCurve> curves;
    std::vector<bool> used(pieces.size(), false);
    for (std::size_t start = 0; start < pieces.size(); ++start) {
        if (used[start])
            continue;
        TorusCurve c;
        c.period = L;
        const std::size_t first_entry = 2 * start;
        std::size_t entry = first_entry;
        TorusPoint lifted = ends[entry].base;
        c.points.push_back(lifted);
        for (;;) {
            const std::size_t k = ends[entry].piece;
            if (used[k])
                throw Error(ErrorKind::ContractBreach, "trace_U: piece revisited while assembling a component");
            used[k] = true;
            const std::size_t exit = entry ^ 1;
            lifted.s += ends[exit].base.s - ends[entry].base.s;
            lifted.t += ends[exit].base.t - ends[entry].base.t;
            c.points.push_back(lifted);
            c.pieces.push_back(pieces[k]);
            c.reversed.push_back(ends[entry].end == 1);
            entry = partner[exit];
            if (entry == first_entry)
                break;
        }
        c.winding = winding(c);
        if (c.winding[0] < 0 || (c.winding[0] == 0 && c.winding[1] < 0)) {
            std::reverse(c.points.begin(), c.points.end());
            std::reverse(c.pieces.begin(), c.pieces.end());
            std::reverse(c.reversed.begin(), c.reversed.end());
            c.reversed.flip();
            c.winding = {-c.winding[0], -c.winding[1]};
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

double diagonal_clearance(const std::vector<TorusCurve>& curves)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
        const double L = c.period;
        for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
            const double d0 = c.points[k].t - c.points[k].s;
            const double d1 = c.points[k + 1].t - c.points[k + 1].s;
            const double lo = std::min(d0, d1), hi = std::max(d0, d1);
            if (std::ceil(lo / L) * L <= hi)
                return 0;
            best = std::min({best, wrapped(d0, L), wrapped(d1, L)});
        }
    }
    return best / std::numbers::sqrt2;
}

RightIsoscelesTriangle smallest_right_isosceles(const Polygon& poly)
{
    require_obtuse(poly);
    const auto pieces = u_pieces(poly);
    if (pieces.empty())
        throw Error(ErrorKind::ContractBreach, "smallest_right_isosceles: U is empty");
    RightIsoscelesTriangle best;
    best.leg = std::numeric_limits<double>::infinity();
    for (const auto& pc : pieces) {
        // z - y = g0 + g1 tau
        const Point g0 = pc.z(poly, 0) - pc.y(poly, 0);
        const Point g1 = pc.z(poly, 1) - pc.y(poly, 1) - g0;
        std::array<double, 3> taus{pc.tau0, pc.tau1, pc.tau0};
        if (g1.squaredNorm() > 0)
            taus[2] = std::clamp(-g0.dot(g1) / g1.squaredNorm(), pc.tau0, pc.tau1);
        for (double tau : taus) {
            const double leg = (g0 + tau * g1).norm();
            if (leg < best.leg) {
                best.y = pc.y(poly, tau);
                best.z = pc.z(poly, tau);
                best.u = rotate(best.z, best.y, -1);
                best.leg = leg;
            }
        }
    }
    return best;
}

std::vector<InscribedSquare> squares_from_UV(const Polygon& poly)
{
    require_obtuse(poly);
    const auto pieces = u_pieces(poly);
    const double D = poly.diameter();

    struct Seg {
        Point a, b;
        Eigen::AlignedBox2d box;
    };
    std::vector<Seg> U, V;
    for (const auto& pc : pieces) {
        const TorusPoint p0 = pc.at(poly, pc.tau0), p1 = pc.at(poly, pc.tau1);
        Seg su{{p0.s, p0.t}, {p1.s, p1.t}, {}};
        // (y, z) -> (u, y)
        const double su0 = poly.arc_start(pc.u_edge) + (pc.beta0 + pc.beta1 * pc.tau0) * poly.edge_length(pc.u_edge);
        const double su1 = poly.arc_start(pc.u_edge) + (pc.beta0 + pc.beta1 * pc.tau1) * poly.edge_length(pc.u_edge);
        Seg sv{{su0, p0.s}, {su1, p1.s}, {}};
        su.box.extend(su.a).extend(su.b);
        sv.box.extend(sv.a).extend(sv.b);
        U.push_back(su);
        V.push_back(sv);
    }

    std::vector<InscribedSquare> found;
    for (std::size_t j = 0; j < U.size(); ++j)
        for (std::size_t k = 0; k < V.size(); ++k) {
            if (!U[j].box.intersects(V[k].box))
                continue;
            const auto hit = segment_intersection(Segment(U[j].a, U[j].b), Segment(V[k].a, V[k].b), 1e-12);
            if (hit.kind == Intersection::Kind::None)
                continue;
            if (hit.kind == Intersection::Kind::Overlap)
                throw Error(ErrorKind::NonGeneric, "squares_from_UV: U and V overlap along a segment");
            const UPiece& pc = pieces[j];
            const double tau = std::clamp(hit.p.x() - poly.arc_start(pc.y_edge), pc.tau0, pc.tau1);
            const Point y = pc.y(poly, tau), z = pc.z(poly, tau);
            const Point u = rotate(z, y, -1);
            const Point v = u + z - y;
            std::array<Point, 4> verts{z, y, u, v};
            if (cross(Point(y - z), Point(u - y)) > 0)
                std::reverse(verts.begin(), verts.end());
            InscribedSquare sq;
            sq.square = Square::from_vertices(verts);
            for (int m = 0; m < 4; ++m) {
                const Point x = sq.square.vertex(m);
                double dist = std::numeric_limits<double>::infinity();
                for (std::size_t e = 0; e < poly.size(); ++e) {
                    const auto [de, te] = distance_to_segment(x, poly.vertex(e), poly.vertex(e + 1));
                    if (de < dist) {
                        dist = de;
                        sq.attachments[m] = {e, te};
                    }
                }
                sq.touches_vertex = sq.touches_vertex || sq.attachments[m].t <= kEpsVertex ||
                                    sq.attachments[m].t >= 1 - kEpsVertex;
            }
            const auto e = sq.edges();
            sq.repeated_edge = e[0] == e[1] || e[0] == e[2] || e[0] == e[3] || e[1] == e[2] || e[1] == e[3] ||
                               e[2] == e[3];
            found.push_back(sq);
        }
    return deduplicate(std::move(found), D);
}

}  // namespace squarepeg
