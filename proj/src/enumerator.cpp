#include "squarepeg/enumerator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace squarepeg {

namespace {

constexpr double kEpsOrthogonal = 1e-9;
// A singular family only matters if it contains a square of at least this
// relative size; smaller "families" are tolerance artifacts at a vertex.
constexpr double kFamilyMinW = 1e-6;

LineQuad<double> lines_of(const Polygon& poly, const EdgeQuad& q)
{
    return {poly.edge_line(q[0]), poly.edge_line(q[1]), poly.edge_line(q[2]), poly.edge_line(q[3])};
}

std::string quad_string(const EdgeQuad& q)
{
    std::ostringstream os;
    os << '(' << q[0] << ',' << q[1] << ',' << q[2] << ',' << q[3] << ')';
    return os.str();
}

// Largest |w| over the affine solution set of a singular system restricted to
// squares whose vertices sit on their closed edges; negative when that set is
// empty or the system is inconsistent.
double singular_family_reach(const Polygon& poly, const EdgeQuad& q, double tol)
{
    const auto lines = lines_of(poly, q);
    const Eigen::Matrix4d M = square_system_matrix(lines);
    const Eigen::Vector4d rhs(lines[0].d, lines[1].d, lines[2].d, lines[3].d);
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector4d sv = svd.singularValues();
    int rank = 0;
    while (rank < 4 && sv(rank) > 1e-6 * sv(0))
        ++rank;
    const int k = 4 - rank;
    if (k == 0)
        return -1;

    Eigen::Vector4d x0 = Eigen::Vector4d::Zero();
    for (int i = 0; i < rank; ++i)
        x0 += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(rhs) / sv(i));
    const double scale = line_scale(lines);
    if ((M * x0 - rhs).norm() > 1e-7 * scale)
        return -1;
    const Eigen::MatrixXd N = svd.matrixV().rightCols(k);

    // t_j(lambda) = G.row(j) lambda + h(j)
    Eigen::MatrixXd G(4, k);
    Eigen::Vector4d h, slack;
    for (int j = 0; j < 4; ++j) {
        Eigen::Matrix<double, 2, 4> P;
        Eigen::Matrix2d Rj = Eigen::Matrix2d::Identity();
        for (int r = 0; r < j; ++r)
            Rj = (Eigen::Matrix2d() << 0, 1, -1, 0).finished() * Rj;
        P << Eigen::Matrix2d::Identity(), Rj;
        const Point A = poly.vertex(q[j]);
        const Point e = poly.edge_vector(q[j]);
        const double inv = 1.0 / e.squaredNorm();
        G.row(j) = (e.transpose() * P * N) * inv;
        h(j) = e.dot(P * x0 - A) * inv;
        slack(j) = tol * poly.diameter() / e.norm();
    }

    double best = -1;
    // Vertices of the feasible polytope: k active bounds on distinct rows.
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<int> rows;
        for (int j = 0; j < 4; ++j)
            if (mask & (1 << j))
                rows.push_back(j);
        if (static_cast<int>(rows.size()) != k)
            continue;
        for (int bounds = 0; bounds < (1 << k); ++bounds) {
            Eigen::MatrixXd A(k, k);
            Eigen::VectorXd b(k);
            for (int r = 0; r < k; ++r) {
                A.row(r) = G.row(rows[r]);
                const double target = (bounds & (1 << r)) ? 1 + slack(rows[r]) : -slack(rows[r]);
                b(r) = target - h(rows[r]);
            }
            const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (lu.rank() < k)
                continue;
            const Eigen::VectorXd lambda = lu.solve(b);
            const Eigen::Vector4d t = G * lambda + h;
            bool feasible = true;
            for (int j = 0; j < 4; ++j)
                if (t(j) < -slack(j) - 1e-9 || t(j) > 1 + slack(j) + 1e-9)
                    feasible = false;
            if (!feasible)
                continue;
            const Eigen::Vector4d x = x0 + N * lambda;
            best = std::max(best, x.tail<2>().norm());
        }
    }
    return best;
}

struct ScanResult {
    std::vector<InscribedSquare> candidates;
    std::vector<Violation> singular;
};

ScanResult scan(const Polygon& poly, double tol, bool canonical_only, bool collect_singular)
{
    const std::size_t n = poly.size();
    const std::size_t total = n * n * n * n;

    auto work = [&](std::size_t begin, std::size_t end, ScanResult& out) {
        for (std::size_t code = begin; code < end; ++code) {
            const EdgeQuad q{code / (n * n * n), (code / (n * n)) % n, (code / n) % n, code % n};
            if (canonical_only && !is_cyclic_canonical(q))
                continue;
            const auto lines = lines_of(poly, q);
            const auto res = square_through_lines(lines);
            if (res.kind == SolveKind::Singular) {
                if (!collect_singular)
                    continue;
                const double reach = singular_family_reach(poly, q, tol);
                if (reach > kFamilyMinW * poly.diameter())
                    out.singular.push_back({ViolationKind::SingularQuadruple,
                                            {q[0], q[1], q[2], q[3]},
                                            "quadruple " + quad_string(q) + " admits a family of inscribed squares"});
                continue;
            }
            if (auto sq = inscribed_for_quad(poly, q, tol))
                out.candidates.push_back(*sq);
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t threads = (n >= 16 && hw > 1) ? hw : 1;
    std::vector<ScanResult> parts(threads);
    if (threads == 1) {
        work(0, total, parts[0]);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (total + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] { work(std::min(total, t * chunk), std::min(total, (t + 1) * chunk), parts[t]); });
    }
    // Chunks are contiguous in quadruple order, so concatenation is
    // independent of the thread count.
    ScanResult all;
    for (auto& p : parts) {
        all.candidates.insert(all.candidates.end(), p.candidates.begin(), p.candidates.end());
        all.singular.insert(all.singular.end(), p.singular.begin(), p.singular.end());
    }
    return all;
}

}  // namespace

std::string to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::OrthogonalEdgePair:
        return "orthogonal-edge-pair";
    case ViolationKind::SingularQuadruple:
        return "singular-quadruple-with-boundary-solution";
    case ViolationKind::SquareVertexAtPolygonVertex:
        return "square-vertex-at-polygon-vertex";
    case ViolationKind::NonObtuseAngle:
        return "non-obtuse-angle";
    }
    return "unknown";
}

bool GenericityReport::generic() const
{
    return std::all_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.kind == ViolationKind::NonObtuseAngle; });
}

bool GenericityReport::obtuse() const { return count(ViolationKind::NonObtuseAngle) == 0; }

std::size_t GenericityReport::count(ViolationKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

EdgeQuad canonical_rotation(const EdgeQuad& q)
{
    EdgeQuad best = q;
    for (int r = 1; r < 4; ++r) {
        const EdgeQuad rot{q[r % 4], q[(r + 1) % 4], q[(r + 2) % 4], q[(r + 3) % 4]};
        best = std::min(best, rot);
    }
    return best;
}

bool is_cyclic_canonical(const EdgeQuad& q) { return canonical_rotation(q) == q; }

double square_distance(const Square& a, const Square& b)
{
    const auto va = a.vertices();
    const auto vb = b.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (int shift = 0; shift < 4; ++shift) {
        double worst = 0;
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, (va[k] - vb[(k + shift) % 4]).norm());
        best = std::min(best, worst);
    }
    return best;
}

std::optional<InscribedSquare> inscribed_for_quad(const Polygon& poly, const EdgeQuad& quad, double tol)
{
    const auto res = square_through_lines(lines_of(poly, quad));
    if (!res.unique())
        return std::nullopt;
    const double D = poly.diameter();
    InscribedSquare out;
    out.square = res.square;
    for (int k = 0; k < 4; ++k) {
        const Point a = res.square.vertex(k);
        const Point A = poly.vertex(quad[k]);
        const Point e = poly.edge_vector(quad[k]);
        const double len = e.norm();
        const double t = e.dot(a - A) / (len * len);
        const double slack = tol * D / len;
        if (t < -slack || t > 1 + slack)
            return std::nullopt;
        if (std::abs(cross(e, Point(a - A))) / len > tol * D)
            return std::nullopt;
        out.attachments[k] = {quad[k], std::clamp(t, 0.0, 1.0)};
        if (std::min(t, 1 - t) * len <= kEpsVertex * D)
            out.touches_vertex = true;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (quad[i] == quad[j])
                out.repeated_edge = true;
    return out;
}

std::vector<InscribedSquare> inscribed_candidates(const Polygon& poly, double tol, bool canonical_only)
{
    return scan(poly, tol, canonical_only, false).candidates;
}

std::vector<InscribedSquare> deduplicate(std::vector<InscribedSquare> candidates, double diameter)
{
    std::vector<InscribedSquare> kept;
    for (auto& cand : candidates) {
        bool merged = false;
        for (auto& k : kept)
            if (square_distance(k.square, cand.square) <= kEpsSameSquare * diameter) {
                // Several quadruples only meet at squares through a polygon vertex.
                k.touches_vertex = true;
                merged = true;
                break;
            }
        if (!merged)
            kept.push_back(std::move(cand));
    }
    std::sort(kept.begin(), kept.end(), [](const InscribedSquare& a, const InscribedSquare& b) {
        const auto ka = std::array{a.square.c.x(), a.square.c.y(), a.square.w.x(), a.square.w.y()};
        const auto kb = std::array{b.square.c.x(), b.square.c.y(), b.square.w.x(), b.square.w.y()};
        return ka < kb;
    });
    return kept;
}

std::vector<InscribedSquare> enumerate_inscribed_squares(const Polygon& poly, double tol)
{
    auto result = scan(poly, tol, true, true);
    if (!result.singular.empty()) {
        GenericityReport report;
        report.violations = std::move(result.singular);
        throw NonGenericInput("polygon admits a continuous family of inscribed squares", std::move(report));
    }
    return deduplicate(std::move(result.candidates), poly.diameter());
}

std::vector<InscribedSquare> enumerate_inscribed_squares_unchecked(const Polygon& poly, double tol)
{
    return deduplicate(scan(poly, tol, true, false).candidates, poly.diameter());
}

GenericityReport check_generic(const Polygon& poly)
{
    GenericityReport report;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point a = poly.edge_vector(i), b = poly.edge_vector(j);
            if (std::abs(a.dot(b)) / (a.norm() * b.norm()) < kEpsOrthogonal)
                report.violations.push_back({ViolationKind::OrthogonalEdgePair,
                                             {i, j},
                                             "edges " + std::to_string(i) + " and " + std::to_string(j) +
                                                 " are orthogonal"});
        }

    auto result = scan(poly, kEpsOn, true, true);
    for (auto& v : result.singular)
        report.violations.push_back(std::move(v));

    const double D = poly.diameter();
    for (const auto& sq : deduplicate(std::move(result.candidates), D)) {
        if (!sq.touches_vertex)
            continue;
        for (int k = 0; k < 4; ++k) {
            const Point a = sq.square.vertex(k);
            for (std::size_t j = 0; j < n; ++j)
                if ((a - poly.vertex(j)).norm() <= kEpsVertex * D) {
                    std::ostringstream os;
                    os << "square centered at (" << sq.square.c.x() << ", " << sq.square.c.y() << ") has vertex "
                       << k << " at polygon vertex " << j;
                    report.violations.push_back(
                        {ViolationKind::SquareVertexAtPolygonVertex, {j, static_cast<std::size_t>(k)}, os.str()});
                }
        }
    }

    const auto angles = interior_angles(poly);
    constexpr double half_pi = std::numbers::pi / 2;
    for (std::size_t i = 0; i < n; ++i)
        if (!(angles[i] > half_pi && angles[i] < 3 * half_pi)) {
            std::ostringstream os;
            os << "interior angle " << angles[i] << " at vertex " << i;
            report.violations.push_back({ViolationKind::NonObtuseAngle, {i}, os.str()});
        }
    return report;
}

ParityResult parity(const Polygon& poly)
{
    auto report = check_generic(poly);
    if (!report.generic())
        throw NonGenericInput("polygon is not generic", std::move(report));
    ParityResult out;
    out.count = enumerate_inscribed_squares(poly).size();
    out.odd = out.count % 2 == 1;
    return out;
}

Polygon perturb(const Polygon& poly, double eps, std::uint64_t seed)
{
    if (eps == 0)
        return poly;
    const double radius = eps * poly.diameter();
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(attempt)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<Point> out;
        out.reserve(poly.size());
        for (const Point& v : poly.vertices()) {
            const double r = radius * std::sqrt(unit(rng));
            const double theta = 2 * std::numbers::pi * unit(rng);
            out.emplace_back(v + r * Point(std::cos(theta), std::sin(theta)));
        }
        try {
            Polygon candidate(std::move(out));
            if (is_simple(candidate).simple && check_generic(candidate).generic())
                return candidate;
        } catch (const Error&) {
            // degenerate draw; try the next attempt
        }
    }
    throw Error(ErrorKind::NonGeneric, "perturbation failed after 100 attempts");
}

}  // namespace squarepeg
