#include "squarepeg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace squarepeg {

namespace {

// Uniform grid answering "is p within r of the boundary?" with a cheap
// rejection for most queries.
class NearBoundaryGrid {
public:
    NearBoundaryGrid(const Polygon& poly, double radius) : poly_(poly), radius_(radius), cell_(radius)
    {
        Eigen::AlignedBox2d box;
        for (const Point& v : poly.vertices())
            box.extend(v);
        origin_ = box.min() - Point::Constant(2 * radius);
        const Point extent = box.max() - box.min() + Point::Constant(4 * radius);
        nx_ = static_cast<int>(std::ceil(extent.x() / cell_)) + 1;
        ny_ = static_cast<int>(std::ceil(extent.y() / cell_)) + 1;
        cells_.resize(static_cast<std::size_t>(nx_) * ny_);
        const double reach = radius + cell_ * std::numbers::sqrt2 / 2;
        for (std::size_t e = 0; e < poly.size(); ++e) {
            const Point a = poly.vertex(e), b = poly.vertex(e + 1);
            const int x0 = cx(std::min(a.x(), b.x()) - radius) - 1, x1 = cx(std::max(a.x(), b.x()) + radius) + 1;
            const int y0 = cy(std::min(a.y(), b.y()) - radius) - 1, y1 = cy(std::max(a.y(), b.y()) + radius) + 1;
            for (int ix = std::max(0, x0); ix <= std::min(nx_ - 1, x1); ++ix)
                for (int iy = std::max(0, y0); iy <= std::min(ny_ - 1, y1); ++iy) {
                    const Point center = origin_ + cell_ * Point(ix + 0.5, iy + 0.5);
                    if (distance_to_segment(center, a, b).first <= reach)
                        cells_[index(ix, iy)].push_back(static_cast<std::uint32_t>(e));
                }
        }
    }

    /// Distance to the boundary if it is at most radius, else +inf.
    double near_distance(const Point& p) const
    {
        const int ix = cx(p.x()), iy = cy(p.y());
        if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_)
            return std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t e : cells_[index(ix, iy)])
            best = std::min(best, distance_to_segment(p, poly_.vertex(e), poly_.vertex(e + 1)).first);
        return best <= radius_ ? best : std::numeric_limits<double>::infinity();
    }

private:
    int cx(double x) const { return static_cast<int>(std::floor((x - origin_.x()) / cell_)); }
    int cy(double y) const { return static_cast<int>(std::floor((y - origin_.y()) / cell_)); }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(ix) * ny_ + iy; }

    const Polygon& poly_;
    double radius_;
    double cell_;
    Point origin_;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<std::uint32_t>> cells_;
};

struct Hit {
    Square square;  // clockwise labeling
    double residual;
    std::uint32_t i, j;
    bool left;  // completion on the left of i -> j
};

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::uint64_t pair_key(std::uint32_t i, std::uint32_t j, bool left)
{
    return (static_cast<std::uint64_t>(i) << 33) | (static_cast<std::uint64_t>(j) << 1) | (left ? 1u : 0u);
}

}  // namespace

std::vector<ApproxSquareCluster> approx_squares(const Polygon& poly, OracleOptions opts)
{
    const std::size_t N = opts.samples;
    if (N < 100)
        throw Error(ErrorKind::PreconditionFailed, "oracle needs at least 100 samples");
    const double D = poly.diameter();
    const double tol = opts.delta * D;
    const double merge = 5 * tol;
    const double L = poly.perimeter();

    std::vector<Point> samples(N);
    for (std::size_t i = 0; i < N; ++i)
        samples[i] = boundary_point(poly, L * static_cast<double>(i) / static_cast<double>(N)).first;

    const NearBoundaryGrid grid(poly, tol);
    std::vector<Hit> hits;
    // Squares smaller than the merge radius are below the oracle's floor:
    // any tiny square hugging the boundary would pass the residual test.
    const double min_side = merge;
    for (std::uint32_t i = 0; i < N; ++i) {
        const Point& p = samples[i];
        for (std::uint32_t j = i + 1; j < N; ++j) {
            const Point& q = samples[j];
            const Point side = q - p;
            if (side.squaredNorm() < min_side * min_side)
                continue;
            for (const bool left : {true, false}) {
                const Point turn = left ? quarter_ccw(side) : quarter_cw(side);
                const Point r = q + turn;
                const double dr = grid.near_distance(r);
                if (!std::isfinite(dr))
                    continue;
                const Point s = p + turn;
                const double ds = grid.near_distance(s);
                if (!std::isfinite(ds))
                    continue;
                // p, q, r, s is clockwise when the completion is on the right.
                const Square sq = left ? Square::from_vertices({p, s, r, q}) : Square::from_vertices({p, q, r, s});
                hits.push_back({sq, std::max(dr, ds) / D, i, j, left});
            }
        }
    }
    // Cluster on the core hits only: the loose ones can bridge distinct
    // squares through shallow valleys of near-squares.
    std::erase_if(hits, [&](const Hit& h) { return h.residual > opts.delta / 2; });
    if (hits.empty())
        return {};

    // Blobs: hits adjacent in sample-index space.
    DisjointSets sets(hits.size());
    std::unordered_map<std::uint64_t, std::size_t> by_key;
    by_key.reserve(hits.size() * 2);
    for (std::size_t h = 0; h < hits.size(); ++h)
        by_key.emplace(pair_key(hits[h].i, hits[h].j, hits[h].left), h);
    for (std::size_t h = 0; h < hits.size(); ++h)
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0)
                    continue;
                std::uint32_t i = static_cast<std::uint32_t>((hits[h].i + N + di) % N);
                std::uint32_t j = static_cast<std::uint32_t>((hits[h].j + N + dj) % N);
                bool left = hits[h].left;
                if (i > j) {
                    std::swap(i, j);
                    left = !left;
                }
                if (auto it = by_key.find(pair_key(i, j, left)); it != by_key.end())
                    sets.unite(h, it->second);
            }

    std::unordered_map<std::size_t, std::vector<std::size_t>> blobs;
    for (std::size_t h = 0; h < hits.size(); ++h)
        blobs[sets.find(h)].push_back(h);

    // Merge blobs whose squares come within the merge radius; compare
    // evenly spaced members so long chains still meet.
    std::vector<std::vector<std::size_t>> blob_list;
    for (auto& [root, members] : blobs)
        blob_list.push_back(std::move(members));
    std::sort(blob_list.begin(), blob_list.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    auto thin = [](const std::vector<std::size_t>& m) {
        constexpr std::size_t kMax = 64;
        if (m.size() <= kMax)
            return m;
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < kMax; ++k)
            out.push_back(m[k * (m.size() - 1) / (kMax - 1)]);
        return out;
    };
    std::vector<std::vector<std::size_t>> thinned;
    for (const auto& b : blob_list)
        thinned.push_back(thin(b));
    DisjointSets blob_sets(blob_list.size());
    for (std::size_t a = 0; a < blob_list.size(); ++a)
        for (std::size_t b = a + 1; b < blob_list.size(); ++b) {
            if (blob_sets.find(a) == blob_sets.find(b))
                continue;
            bool near = false;
            for (std::size_t x : thinned[a]) {
                for (std::size_t y : thinned[b])
                    if (square_distance(hits[x].square, hits[y].square) <= merge) {
                        near = true;
                        break;
                    }
                if (near)
                    break;
            }
            if (near)
                blob_sets.unite(a, b);
        }

    std::unordered_map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t b = 0; b < blob_list.size(); ++b) {
        auto& c = clusters[blob_sets.find(b)];
        c.insert(c.end(), blob_list[b].begin(), blob_list[b].end());
    }

    std::vector<ApproxSquareCluster> out;
    for (auto& [root, members] : clusters) {
        if (N >= 2000 && members.size() < 3)
            continue;
        ApproxSquareCluster cl;
        cl.hits = members.size();
        std::size_t best = members.front();
        std::unordered_set<std::uint32_t> covered;
        for (std::size_t h : members) {
            if (hits[h].residual < hits[best].residual)
                best = h;
            covered.insert(hits[h].i);
            covered.insert(hits[h].j);
        }
        // Near misses: the whole cluster stays a visible fraction of delta away.
        if (hits[best].residual > opts.delta / 4)
            continue;
        cl.representative = hits[best].square;
        cl.residual = hits[best].residual;
        cl.chain_length = static_cast<double>(covered.size()) * L / static_cast<double>(N);
        if (cl.chain_length > 50 * merge)
            throw Error(ErrorKind::NonGeneric, "continuum suspected: a cluster of near-squares covers " +
                                                   std::to_string(cl.chain_length) + " of the boundary");
        out.push_back(cl);
    }
    std::sort(out.begin(), out.end(), [](const ApproxSquareCluster& a, const ApproxSquareCluster& b) {
        return std::pair(a.representative.c.x(), a.representative.c.y()) <
               std::pair(b.representative.c.x(), b.representative.c.y());
    });
    return out;
}

OracleComparison compare(const std::vector<InscribedSquare>& exact, const std::vector<ApproxSquareCluster>& approx,
                         double delta, double diameter)
{
    struct Candidate {
        double dist;
        std::size_t e, a;
    };
    std::vector<Candidate> cands;
    const double radius = 5 * delta * diameter;
    for (std::size_t e = 0; e < exact.size(); ++e)
        for (std::size_t a = 0; a < approx.size(); ++a) {
            const double d = square_distance(exact[e].square, approx[a].representative);
            if (d <= radius)
                cands.push_back({d, e, a});
        }
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
        return std::tie(x.dist, x.e, x.a) < std::tie(y.dist, y.e, y.a);
    });
    std::vector<bool> used_e(exact.size()), used_a(approx.size());
    OracleComparison cmp;
    for (const auto& c : cands)
        if (!used_e[c.e] && !used_a[c.a]) {
            used_e[c.e] = used_a[c.a] = true;
            cmp.matched.emplace_back(c.e, c.a);
        }
    for (std::size_t e = 0; e < exact.size(); ++e)
        if (!used_e[e])
            cmp.unmatched_exact.push_back(e);
    for (std::size_t a = 0; a < approx.size(); ++a)
        if (!used_a[a])
            cmp.unmatched_approx.push_back(a);
    std::sort(cmp.matched.begin(), cmp.matched.end());
    return cmp;
}

}  // namespace squarepeg
