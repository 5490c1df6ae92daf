#include "squarepeg/cli.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "squarepeg/deformation.hpp"
#include "squarepeg/enumerator.hpp"
#include "squarepeg/generate.hpp"
#include "squarepeg/io.hpp"
#include "squarepeg/oracle.hpp"
#include "squarepeg/svg.hpp"
#include "squarepeg/torus.hpp"

namespace squarepeg {

namespace {

using Json = nlohmann::ordered_json;

Json point(const Point& p) { return Json::array({p.x(), p.y()}); }

Json square_json(const Square& s)
{
    Json v = Json::array();
    for (int k = 0; k < 4; ++k)
        v.push_back(point(s.vertex(k)));
    return {{"center", point(s.c)}, {"side", s.side()}, {"vertices", v}};
}

Json inscribed_json(const InscribedSquare& s)
{
    Json j = square_json(s.square);
    Json att = Json::array();
    for (const auto& a : s.attachments)
        att.push_back({{"edge", a.edge}, {"t", a.t}});
    j["attachments"] = att;
    j["touches_vertex"] = s.touches_vertex;
    j["repeated_edge"] = s.repeated_edge;
    return j;
}

Json report_json(const GenericityReport& r)
{
    Json v = Json::array();
    for (const auto& x : r.violations)
        v.push_back({{"kind", to_string(x.kind)}, {"indices", x.indices}, {"witness", x.witness}});
    return {{"generic", r.generic()}, {"obtuse", r.obtuse()}, {"violations", v}};
}

Json quad_json(const EdgeQuad& q) { return Json::array({q[0], q[1], q[2], q[3]}); }

Json event_json(const Event& e)
{
    return {{"time", e.time},
            {"kind", to_string(e.kind)},
            {"polygon_vertex", e.polygon_vertex},
            {"square_vertex", e.square_vertex},
            {"delta_count", e.delta_count},
            {"quad", quad_json(e.quad)},
            {"partner", quad_json(e.partner)}};
}

void print_report(std::ostream& os, const GenericityReport& r)
{
    if (r.violations.empty()) {
        os << "no violations\n";
        return;
    }
    for (const auto& v : r.violations) {
        os << "  " << to_string(v.kind) << " [";
        for (std::size_t k = 0; k < v.indices.size(); ++k)
            os << (k ? " " : "") << v.indices[k];
        os << "]";
        if (!v.witness.empty())
            os << " " << v.witness;
        os << '\n';
    }
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string fmt(const Point& p) { return "(" + fmt(p.x()) + ", " + fmt(p.y()) + ")"; }

struct Common {
    std::string input;
    bool json = false;
};

// Shared by find and parity: strict mode refuses non-generic polygons.
void require_generic(const Polygon& poly, bool force)
{
    if (force)
        return;
    auto report = check_generic(poly);
    if (!report.generic())
        throw NonGenericInput("polygon is not generic; rerun with --force to enumerate anyway", std::move(report));
}

int cmd_find(const Common& c, double tol, bool force, const std::string& svg, std::ostream& out)
{
    const Polygon poly = load_polygon(c.input);
    require_generic(poly, force);
    const auto squares = force ? enumerate_inscribed_squares_unchecked(poly, tol) : enumerate_inscribed_squares(poly, tol);
    if (!svg.empty())
        render_svg(poly, squares, nullptr, svg);
    if (c.json) {
        Json list = Json::array();
        for (const auto& s : squares)
            list.push_back(inscribed_json(s));
        out << Json{{"command", "find"}, {"vertices", poly.size()}, {"count", squares.size()},
                    {"odd", squares.size() % 2 == 1}, {"forced", force}, {"squares", list}}
                   .dump(2)
            << '\n';
        return 0;
    }
    out << squares.size() << " inscribed square" << (squares.size() == 1 ? "" : "s") << '\n';
    for (std::size_t k = 0; k < squares.size(); ++k) {
        const auto& s = squares[k];
        out << "square " << k << ": side " << fmt(s.square.side()) << '\n';
        for (int i = 0; i < 4; ++i)
            out << "  " << fmt(s.square.vertex(i)) << " on edge " << s.attachments[i].edge << " at t="
                << fmt(s.attachments[i].t) << '\n';
    }
    return 0;
}

int cmd_parity(const Common& c, bool force, std::ostream& out)
{
    const Polygon poly = load_polygon(c.input);
    std::size_t count = 0;
    if (force) {
        count = enumerate_inscribed_squares_unchecked(poly).size();
    } else {
        require_generic(poly, false);
        count = parity(poly).count;
    }
    if (c.json)
        out << Json{{"command", "parity"}, {"count", count}, {"odd", count % 2 == 1}, {"forced", force}}.dump(2) << '\n';
    else
        out << count << " (" << (count % 2 ? "odd" : "even") << ")\n";
    return 0;
}

int cmd_trace(const Common& c, const std::string& svg, std::ostream& out)
{
    const Polygon poly = load_polygon(c.input);
    const auto curves = trace_U(poly);
    const double clearance = diagonal_clearance(curves);
    const bool obtuse = check_generic(poly).obtuse();
    std::optional<RightIsoscelesTriangle> smallest;
    std::vector<InscribedSquare> squares;
    if (obtuse) {
        smallest = smallest_right_isosceles(poly);
        squares = squares_from_UV(poly);
    }
    if (!svg.empty())
        render_svg(poly, squares, &curves, svg);
    if (c.json) {
        Json comps = Json::array();
        for (const auto& cv : curves) {
            Json pts = Json::array();
            for (const auto& p : cv.points)
                pts.push_back(Json::array({p.s, p.t}));
            comps.push_back({{"winding", Json::array({cv.winding[0], cv.winding[1]})},
                             {"period", cv.period},
                             {"pieces", cv.pieces.size()},
                             {"points", pts}});
        }
        Json doc{{"command", "trace"}, {"obtuse", obtuse}, {"components", comps}, {"diagonal_clearance", clearance}};
        if (smallest)
            doc["smallest_right_isosceles"] = {
                {"y", point(smallest->y)}, {"z", point(smallest->z)}, {"u", point(smallest->u)}, {"leg", smallest->leg}};
        else
            doc["smallest_right_isosceles"] = nullptr;
        Json list = Json::array();
        for (const auto& s : squares)
            list.push_back(inscribed_json(s));
        doc["squares_from_uv"] = obtuse ? Json(list) : Json(nullptr);
        out << doc.dump(2) << '\n';
        return 0;
    }
    out << curves.size() << " component" << (curves.size() == 1 ? "" : "s") << " of U\n";
    for (std::size_t k = 0; k < curves.size(); ++k)
        out << "  component " << k << ": winding (" << curves[k].winding[0] << ", " << curves[k].winding[1] << "), "
            << curves[k].pieces.size() << " pieces\n";
    out << "diagonal clearance " << fmt(clearance) << '\n';
    if (smallest) {
        out << "smallest right isosceles triangle: leg " << fmt(smallest->leg) << ", y " << fmt(smallest->y) << ", z "
            << fmt(smallest->z) << ", u " << fmt(smallest->u) << '\n';
        out << squares.size() << " squares from U and V\n";
    } else {
        out << "polygon is not obtuse; smallest triangle and U/V squares skipped\n";
    }
    return 0;
}

int cmd_deform(const Common& c, int steps, const std::string& log, std::ostream& out)
{
    if (steps < 100)
        throw Error(ErrorKind::InvalidInput, "--steps must be at least 100 (step <= 1e-2)");
    const DeformationScenario sc = load_scenario(c.input);
    const double step = (sc.end() - sc.start()) / steps;
    const SweepResult r = sweep(sc, std::min(step, 1e-2));
    int sum = 0;
    bool constant = true;
    for (const auto& e : r.events)
        sum += e.delta_count;
    for (const auto& [t, n] : r.parity_timeline)
        constant &= n % 2 == r.parity_timeline.front().second % 2;
    const long change = static_cast<long>(r.parity_timeline.back().second) -
                        static_cast<long>(r.parity_timeline.front().second);
    if (!log.empty()) {
        std::string lines;
        for (const auto& e : r.events)
            lines += event_json(e).dump() + '\n';
        write_file(log, lines);
    }
    if (c.json) {
        Json tracks = Json::array();
        for (const auto& tr : r.tracks)
            tracks.push_back({{"quad", quad_json(tr.quad)},
                              {"birth", tr.birth},
                              {"death", tr.death},
                              {"termination", to_string(tr.termination)},
                              {"samples", tr.samples.size()}});
        Json events = Json::array();
        for (const auto& e : r.events)
            events.push_back(event_json(e));
        Json timeline = Json::array();
        for (const auto& [t, n] : r.parity_timeline)
            timeline.push_back(Json::array({t, n}));
        Json ng = Json::array();
        for (const auto& x : r.nongeneric)
            ng.push_back({{"time", x.time}, {"reason", x.reason}});
        out << Json{{"command", "deform"},
                    {"keyframes", sc.keyframes().size()},
                    {"step", std::min(step, 1e-2)},
                    {"tracks", tracks},
                    {"events", events},
                    {"parity_timeline", timeline},
                    {"nongeneric", ng},
                    {"parity_constant", constant},
                    {"delta_sum", sum},
                    {"count_change", change}}
                   .dump(2)
            << '\n';
        return 0;
    }
    out << "counts " << r.parity_timeline.front().second << " -> " << r.parity_timeline.back().second << ", "
        << r.tracks.size() << " tracks, " << r.events.size() << " events\n";
    for (const auto& e : r.events)
        out << "  t=" << fmt(e.time) << " " << to_string(e.kind) << " at x" << e.polygon_vertex << " (square vertex "
            << e.square_vertex << "), delta " << e.delta_count << '\n';
    for (const auto& x : r.nongeneric)
        out << "  non-generic at t=" << fmt(x.time) << ": " << x.reason << '\n';
    out << "parity " << (constant ? "constant" : "NOT constant") << ", delta sum " << sum << ", count change "
        << change << '\n';
    return 0;
}

int cmd_oracle(const Common& c, std::size_t samples, double delta, std::ostream& out)
{
    const Polygon poly = load_polygon(c.input);
    const auto clusters = approx_squares(poly, {samples, delta});
    const auto exact = enumerate_inscribed_squares_unchecked(poly);
    const auto cmp = compare(exact, clusters, delta, poly.diameter());
    if (c.json) {
        Json list = Json::array();
        for (const auto& cl : clusters) {
            Json j = square_json(cl.representative);
            j["hits"] = cl.hits;
            j["residual"] = cl.residual;
            j["chain_length"] = cl.chain_length;
            list.push_back(j);
        }
        Json matched = Json::array();
        for (const auto& [e, a] : cmp.matched)
            matched.push_back(Json::array({e, a}));
        out << Json{{"command", "oracle"},
                    {"samples", samples},
                    {"delta", delta},
                    {"clusters", list},
                    {"exact_count", exact.size()},
                    {"matched", matched},
                    {"unmatched_exact", cmp.unmatched_exact},
                    {"unmatched_approx", cmp.unmatched_approx},
                    {"agree", cmp.agree()}}
                   .dump(2)
            << '\n';
        return 0;
    }
    out << clusters.size() << " cluster" << (clusters.size() == 1 ? "" : "s") << " (N=" << samples
        << ", delta=" << fmt(delta) << "), " << exact.size() << " exact\n";
    for (std::size_t k = 0; k < clusters.size(); ++k)
        out << "  cluster " << k << ": center " << fmt(clusters[k].representative.c) << ", side "
            << fmt(clusters[k].representative.side()) << ", " << clusters[k].hits << " hits, residual "
            << fmt(clusters[k].residual) << '\n';
    out << (cmp.agree() ? "agree" : "DISAGREE") << '\n';
    return 0;
}

int cmd_check(const Common& c, std::ostream& out)
{
    const Polygon poly = load_polygon(c.input);
    const auto report = check_generic(poly);
    if (c.json) {
        Json doc = report_json(report);
        doc["command"] = "check";
        out << doc.dump(2) << '\n';
        return 0;
    }
    out << (report.generic() ? "generic" : "not generic") << ", " << (report.obtuse() ? "obtuse" : "not obtuse")
        << '\n';
    print_report(out, report);
    return 0;
}

int cmd_gen(std::size_t n, std::uint64_t seed, const std::string& method, double eps, const std::string& output,
            std::ostream& out)
{
    Polygon poly = gen_random_polygon(n, seed, parse_gen_method(method));
    if (eps > 0)
        poly = perturb(poly, eps, seed);
    if (output.empty())
        out << format_polygon(poly);
    else
        save_polygon(poly, output);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Inscribed squares in simple polygons", "squares"};
    app.require_subcommand(1);

    Common common;
    double tol = kEpsOn;
    bool force = false;
    std::string svg, log, method = "angular", output;
    int steps = 100;
    std::size_t samples = 4000, n = 8;
    double delta = 0.01, eps = 0;
    std::uint64_t seed = 1;

    auto input = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("input", common.input, what)->required();
        sub->add_flag("--json", common.json, "Machine-readable output");
    };

    auto* find = app.add_subcommand("find", "List the inscribed squares");
    input(find, "Polygon file");
    find->add_option("--tol", tol, "Incidence tolerance relative to the diameter");
    find->add_flag("--force", force, "Skip the genericity gate");
    find->add_option("--svg", svg, "Write an SVG figure");

    auto* par = app.add_subcommand("parity", "Count the inscribed squares");
    input(par, "Polygon file");
    par->add_flag("--force", force, "Skip the genericity gate");

    auto* trace = app.add_subcommand("trace", "Trace the torus curves of right isosceles triangles");
    input(trace, "Polygon file");
    trace->add_option("--svg", svg, "Write an SVG figure with a torus panel");

    auto* deform = app.add_subcommand("deform", "Follow squares along a deformation");
    input(deform, "Scenario file");
    deform->add_option("--steps", steps, "Samples per unit time (at least 100)");
    deform->add_option("--log", log, "Write events as JSON lines");

    auto* oracle = app.add_subcommand("oracle", "Brute-force approximate squares and compare");
    input(oracle, "Polygon file");
    oracle->add_option("--samples", samples, "Boundary samples N");
    oracle->add_option("--delta", delta, "Relative tolerance");

    auto* check = app.add_subcommand("check", "Report genericity violations");
    input(check, "Polygon file");

    auto* gen = app.add_subcommand("gen", "Generate a random simple polygon");
    gen->add_option("n", n, "Vertex count")->required();
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--method", method, "angular or uncross");
    gen->add_option("--perturb", eps, "Perturb to a generic polygon with this relative radius");
    gen->add_option("-o,--output", output, "Write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*find)
            return cmd_find(common, tol, force, svg, out);
        if (*par)
            return cmd_parity(common, force, out);
        if (*trace)
            return cmd_trace(common, svg, out);
        if (*deform)
            return cmd_deform(common, steps, log, out);
        if (*oracle)
            return cmd_oracle(common, samples, delta, out);
        if (*check)
            return cmd_check(common, out);
        return cmd_gen(n, seed, method, eps, output, out);
    } catch (const NonGenericInput& e) {
        if (common.json)
            out << Json{{"error", "NonGenericInput"}, {"message", e.what()}, {"report", report_json(e.report())}}.dump(2)
                << '\n';
        err << "non-generic input: " << e.what() << '\n';
        print_report(err, e.report());
        return exit_code(e.kind());
    } catch (const Error& e) {
        if (common.json)
            out << Json{{"error", "Error"}, {"exit_code", exit_code(e.kind())}, {"message", e.what()}}.dump(2) << '\n';
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace squarepeg
