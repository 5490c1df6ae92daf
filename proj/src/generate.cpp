#include "squarepeg/generate.hpp"

#include <algorithm>
#include <numbers>
#include <random>

namespace squarepeg {

GenMethod parse_gen_method(const std::string& name)
{
    if (name == "angular")
        return GenMethod::Angular;
    if (name == "uncross")
        return GenMethod::Uncross;
    throw Error(ErrorKind::InvalidInput, "unknown generator method '" + name + "' (expected angular or uncross)");
}

Polygon gen_random_polygon(std::size_t n, std::uint64_t seed, GenMethod method)
{
    if (n < 3)
        throw Error(ErrorKind::InvalidInput, "gen_random_polygon: n must be at least 3");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0, 1);
    std::vector<Point> v(n);

    if (method == GenMethod::Angular) {
        // A gap of pi or more between consecutive rays would leave the origin
        // outside the kernel; redraw until it is inside.
        std::vector<double> angles(n);
        for (;;) {
            for (double& a : angles)
                a = 2 * std::numbers::pi * unit(rng);
            std::sort(angles.begin(), angles.end());
            double gap = angles.front() + 2 * std::numbers::pi - angles.back();
            for (std::size_t i = 1; i < n; ++i)
                gap = std::max(gap, angles[i] - angles[i - 1]);
            if (gap < 0.95 * std::numbers::pi)
                break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double r = 0.3 + 0.7 * unit(rng);
            v[i] = Point(r * std::cos(angles[i]), r * std::sin(angles[i]));
        }
        return Polygon(std::move(v));
    }

    for (Point& p : v)
        p = Point(unit(rng), unit(rng));
    for (std::size_t swaps = 0;; ++swaps) {
        const auto report = is_simple(Polygon(v));
        if (report.simple)
            return Polygon(std::move(v));
        if (swaps == 100000)
            throw Error(ErrorKind::PreconditionFailed, "UncrossFailed: polygon still self-intersects after 1e5 swaps");
        auto [i, j] = report.offending.front();
        if (j == i + 1 || (i == 0 && j == n - 1)) {
            // Adjacent edges folding onto each other: swap the shared vertex's neighbours.
            std::swap(v[(i + 1) % n], v[(i + 2) % n]);
            continue;
        }
        std::reverse(v.begin() + static_cast<std::ptrdiff_t>(i + 1), v.begin() + static_cast<std::ptrdiff_t>(j + 1));
    }
}

}  // namespace squarepeg
