// Acceptance run: one PASS/FAIL line per criterion, with runtimes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "squarepeg/cli.hpp"
#include "squarepeg/deformation.hpp"
#include "squarepeg/enumerator.hpp"
#include "squarepeg/generate.hpp"
#include "squarepeg/io.hpp"
#include "squarepeg/oracle.hpp"
#include "squarepeg/torus.hpp"

using namespace squarepeg;
using namespace squarepeg::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::string kData = SQUAREPEG_DATA_DIR;

std::vector<std::pair<std::string, Polygon>> generic_fixtures()
{
    std::vector<std::pair<std::string, Polygon>> out;
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(kData + "/fixtures"))
        paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
        Polygon poly = load_polygon(p.string());
        if (check_generic(poly).generic())
            out.emplace_back(p.stem().string(), std::move(poly));
    }
    return out;
}

std::string str(double x, const char* f = "%.3g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome right_triangle_count()
{
    const std::string path = kData + "/fixtures/righttri.json";
    std::vector<const char*> argv{"squares", "find", path.c_str(), "--force", "--json"};
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    const auto found = nlohmann::json::parse(out.str())["count"].get<int>();
    const auto clusters = approx_squares(load_polygon(path), {4000, 0.01});
    return {code == 0 && found == 2 && clusters.size() == 2,
            "find --force: " + std::to_string(found) + " squares, oracle: " + std::to_string(clusters.size()) +
                " clusters"};
}

Outcome odd_parity()
{
    int odd = 0, even_generic = 0, even_excused = 0, skipped = 0, total = 0;
    for (std::uint64_t seed = 0; total < 200; ++seed) {
        const std::size_t n = 5 + seed % 8;
        const GenMethod method = seed % 2 ? GenMethod::Uncross : GenMethod::Angular;
        Polygon p;
        try {
            p = perturb(gen_random_polygon(n, 7000 + seed, method), 1e-3, seed);
        } catch (const Error&) {
            ++skipped;
            continue;
        }
        ++total;
        const std::size_t count = enumerate_inscribed_squares_unchecked(p).size();
        if (count % 2) {
            ++odd;
        } else if (check_generic(p).violations.empty()) {
            ++even_generic;
        } else {
            ++even_excused;
        }
    }
    return {even_generic == 0 && even_excused == 0,
            std::to_string(odd) + "/" + std::to_string(total) + " odd, " + std::to_string(even_generic) +
                " even without a report, " + std::to_string(even_excused) + " even with a report, " +
                std::to_string(skipped) + " seeds where perturbation gave up"};
}

Outcome four_line_square()
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), off(-3, 3);
    int solved = 0, compared = 0, bad_incidence = 0, bad_cross = 0;
    double worst = 0;
    while (solved < 1000) {
        auto line = [&] {
            const double a = ang(rng);
            return Line(Point(std::cos(a), std::sin(a)), off(rng));
        };
        const LineQuad<double> lines{line(), line(), line(), line()};
        const auto a = square_through_lines(lines);
        if (!a.unique())
            continue;
        ++solved;
        const double scale = solution_scale(lines, a.square);
        for (int k = 0; k < 4; ++k)
            if (std::abs(lines[k].signed_distance(a.square.vertex(k))) > 1e-9 * scale)
                ++bad_incidence;
        const auto b = square_by_rotation_construction(lines);
        if (!b.unique())
            continue;
        ++compared;
        double gap = 0;
        for (int k = 0; k < 4; ++k)
            gap = std::max(gap, (a.square.vertex(k) - b.square.vertex(k)).norm() / scale);
        worst = std::max(worst, gap);
        bad_cross += gap > 1e-8;
    }
    return {bad_incidence == 0 && bad_cross == 0,
            std::to_string(solved) + " quadruples, " + std::to_string(bad_incidence) + " incidence failures, " +
                std::to_string(compared) + " cross-checked, worst gap " + str(worst) + "·scale"};
}

Outcome torus_machinery()
{
    const Polygon p = perturb(regular(5), 1e-3, 1);
    const double L = p.perimeter(), D = p.diameter();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, L);
    int odd = 0, tested = 0, rejected = 0;
    while (tested < 100) {
        const double s = u(rng);
        const auto [y, e] = boundary_point(p, s);
        const double tau = s - p.arc_start(e);
        if (tau < 1e-6 || tau > p.edge_length(e) - 1e-6)
            continue;
        // Generic y: the fiber size is locally constant.
        const std::size_t f = u_fiber(p, y).size();
        if (u_fiber(p, boundary_point(p, s - 1e-7 * L).first).size() != f ||
            u_fiber(p, boundary_point(p, s + 1e-7 * L).first).size() != f) {
            ++rejected;
            continue;
        }
        ++tested;
        odd += f % 2;
    }
    const auto curves = trace_U(p);
    bool diagonal_class = false;
    for (const auto& c : curves)
        diagonal_class |= c.winding == std::array<long long, 2>{1, 1};
    const double clearance = diagonal_clearance(curves);
    const auto uv = squares_from_UV(p);
    const auto exact = enumerate_inscribed_squares(p);
    bool same = uv.size() == exact.size();
    for (const auto& s : exact) {
        bool found = false;
        for (const auto& t : uv)
            found |= square_distance(s.square, t.square) <= 1e-5 * D;
        same &= found;
    }
    return {odd == 100 && diagonal_class && clearance > 0 && same,
            "(a) " + std::to_string(odd) + "/100 odd fibers (" + std::to_string(rejected) +
                " non-generic y redrawn), (b) winding (1,1) " + (diagonal_class ? "present" : "absent") +
                ", (c) clearance " + str(clearance) + ", (d) U∩V " + std::to_string(uv.size()) + " vs enumerator " +
                std::to_string(exact.size()) + (same ? " equal" : " differ")};
}

Outcome deformation_parity()
{
    int good = 0, skipped = 0, bad = 0, events = 0, instants = 0;
    for (int s = 0; good < 20 && s < 500; ++s) {
        SweepResult r;
        try {
            const Polygon a = perturb(gen_random_polygon(5, 3000 + 2 * s, GenMethod::Angular), 1e-3, s);
            const Polygon b = perturb(gen_random_polygon(5, 3001 + 2 * s, GenMethod::Angular), 1e-3, s);
            r = sweep(DeformationScenario({{0, a}, {1, b}}), 1e-2);
        } catch (const Error&) {
            ++skipped;
            continue;
        }
        ++good;
        int sum = 0;
        bool constant = true;
        for (const auto& e : r.events)
            sum += e.delta_count;
        for (const auto& [t, c] : r.parity_timeline)
            constant &= c % 2 == r.parity_timeline.front().second % 2;
        const int change =
            static_cast<int>(r.parity_timeline.back().second) - static_cast<int>(r.parity_timeline.front().second);
        bad += !(constant && sum == change);
        events += static_cast<int>(r.events.size());
        instants += static_cast<int>(r.nongeneric.size());
    }
    auto single = [](const std::string& name, EventKind want, int delta) {
        const auto sc = load_scenario(kData + "/scenarios/" + name + ".json");
        const auto r = sweep(sc, 1e-2);
        if (r.events.size() != 1)
            return false;
        const Event& e = r.events.front();
        return e.kind == want && e.delta_count == delta &&
               classify_event(sc, e.time, e.polygon_vertex, e.square_vertex) == want;
    };
    const bool pass_through = single("passthrough", EventKind::PassThrough, 0);
    const bool annihilation = single("annihilation", EventKind::AnnihilationPair, -2);
    return {good == 20 && bad == 0 && pass_through && annihilation,
            std::to_string(good) + " scenarios (" + std::to_string(skipped) + " skipped as non-simple or non-generic), " +
                std::to_string(events) + " events, " + std::to_string(instants) + " logged non-generic instants, " +
                std::to_string(bad) + " violations; bundled pass-through " + (pass_through ? "ok" : "wrong") +
                ", annihilation " + (annihilation ? "ok" : "wrong")};
}

Outcome shrink()
{
    const DeformationScenario sc = bundled_shrink_scenario();
    const std::size_t z = enumerate_inscribed_squares(sc.keyframes().back().polygon).size();
    const auto r = sweep(sc, 1e-2);
    bool odd = true;
    for (const auto& [t, c] : r.parity_timeline)
        odd &= c % 2 == 1;
    return {z == 1 && odd, "Z has " + std::to_string(z) + " square(s), " + std::to_string(r.parity_timeline.size()) +
                               " samples " + (odd ? "all odd" : "NOT all odd") + ", " +
                               std::to_string(r.events.size()) + " events"};
}

Outcome oracle_agreement()
{
    const auto fixtures = generic_fixtures();
    int agree = 0;
    std::string misses;
    for (const auto& [name, p] : fixtures) {
        const auto exact = enumerate_inscribed_squares(p);
        const auto approx = approx_squares(p, {4000, 0.01});
        if (exact.size() == approx.size() && compare(exact, approx, 0.01, p.diameter()).agree())
            ++agree;
        else
            misses += " " + name;
    }
    return {fixtures.size() >= 10 && agree == static_cast<int>(fixtures.size()),
            std::to_string(agree) + "/" + std::to_string(fixtures.size()) + " fixtures agree" +
                (misses.empty() ? "" : ", disagree:" + misses)};
}

Outcome equivariance()
{
    const auto fixtures = generic_fixtures();
    std::mt19937_64 rng(17);
    double worst = 0;
    int failures = 0;
    for (const auto& [name, p] : fixtures) {
        const auto base = enumerate_inscribed_squares(p);
        std::vector<std::pair<Eigen::Matrix2d, Point>> maps;
        const Rigid m = random_rigid(rng);
        maps.emplace_back(m.A, m.b);
        for (double lambda : {0.5, 3.0})
            maps.emplace_back(Eigen::Matrix2d(lambda * Eigen::Matrix2d::Identity()), Point(0, 0));
        for (const auto& [A, b] : maps) {
            const Polygon q = transformed(p, A, b);
            const auto moved = enumerate_inscribed_squares(q);
            if (moved.size() != base.size()) {
                ++failures;
                continue;
            }
            for (const auto& s : base) {
                const Square t{A * s.square.c + b, A * s.square.w};
                double best = std::numeric_limits<double>::infinity();
                for (const auto& r : moved)
                    best = std::min(best, square_distance(t, r.square));
                worst = std::max(worst, best / q.diameter());
                failures += best > 1e-8 * q.diameter();
            }
        }
    }
    return {failures == 0, std::to_string(fixtures.size()) + " fixtures x 3 maps, worst deviation " + str(worst) +
                               "·D, " + std::to_string(failures) + " failures"};
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "right-triangle count", 1, right_triangle_count},
        {2, "odd parity of random polygons", 120, odd_parity},
        {3, "four-line square solver", 5, four_line_square},
        {4, "torus machinery", 30, torus_machinery},
        {5, "deformation parity invariance", 120, deformation_parity},
        {6, "shrink scenario", 60, shrink},
        {7, "oracle agreement", 60, oracle_agreement},
        {8, "equivariance", 60, equivariance},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs < c.limit;
        failed += !pass;
        std::printf("criterion %d %-30s %s  %.2fs (limit %.0fs)  %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                    c.limit, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
